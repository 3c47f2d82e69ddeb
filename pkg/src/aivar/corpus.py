"""Paths to the bundled example corpora."""

from importlib.resources import files

_DATA = files("aivar") / "data"

FIVE_PERSONS = _DATA / "five_persons.csv"
CANDIDATES = _DATA / "candidates.csv"
ADMINISTRATIVE_FINES = _DATA / "administrative_fines.csv"
BREACH_PREDICTIONS = _DATA / "breach_predictions.csv"
RISK_PREDICTIONS = _DATA / "risk_predictions.csv"
PATIENTS_ANSWER = _DATA / "patients_answer.txt"
PATIENT_NAMES = _DATA / "patient_names.txt"
