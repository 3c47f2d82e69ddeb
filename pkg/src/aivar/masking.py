"""Dictionary-driven name masking for generated text: ``Carlos`` becomes ``Cxxxxx``."""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable

from .errors import AivarError

# maximal runs of letters (any script); digits and underscores break a word
_WORD = re.compile(r"[^\W\d_]+")


def mask_token(token: str) -> str:
    if not token:
        raise AivarError("cannot mask an empty token")
    return token[0] + "".join("x" if ch.isalpha() else ch for ch in token[1:])


class NameDictionary:
    """Case-insensitive set of alphabetic name tokens."""

    def __init__(self, names: Iterable[str] = ()):
        folded = set()
        for name in names:
            name = name.strip()
            if not name:
                continue
            if not _WORD.fullmatch(name):
                raise AivarError(f"name token {name!r} is not purely alphabetic")
            folded.add(name.casefold())
        self._names = frozenset(folded)

    @classmethod
    def load(cls, path: str | Path) -> "NameDictionary":
        return cls(Path(path).read_text(encoding="utf-8").splitlines())

    def __contains__(self, token: str) -> bool:
        return token.casefold() in self._names

    def __len__(self):
        return len(self._names)


def mask_text(text: str, names: NameDictionary | Iterable[str]) -> str:
    if not isinstance(names, NameDictionary):
        names = NameDictionary(names)
    if not len(names):
        return text
    return _WORD.sub(lambda m: mask_token(m.group()) if m.group() in names else m.group(), text)
