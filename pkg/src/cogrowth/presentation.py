"""Group presentations: text format, bundled files and the relator closure.

File format::

    # comment
    gens: a b c
    rel: aabAAAB
    rel: c = [a, B]          # u = v is read as u v^-1
    rel: a^(bb) = a^2        # x^n repeats, x^y conjugates (y^-1 x y)
    rel: [[c,a],a]           # [u,v] = u^-1 v^-1 u v

Lowercase letters are generators, uppercase their inverses, ``1`` is the
empty word.  Whitespace is ignored inside relators.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .words import (
    EMPTY,
    Word,
    all_letters,
    commutator,
    concat_reduce,
    conjugate,
    cyclic_permutations,
    format_word,
    free_reduce,
    inverse,
    power,
)


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]
    name: str = ""
    source: str = field(default="", compare=False, repr=False)

    def __post_init__(self):
        if not self.generator_names:
            raise PresentationError("empty generator list")
        if len(set(self.generator_names)) != len(self.generator_names):
            raise PresentationError(f"duplicate generator name in {self.generator_names}")
        k = len(self.generator_names)
        for r in self.relators:
            if not r:
                raise PresentationError("relator reduces to the empty word")
            if free_reduce(r) != tuple(r):
                raise PresentationError(f"relator {r} is not freely reduced")
            if any(abs(x) > k for x in r):
                raise PresentationError(f"relator {r} uses an unknown generator")

    @property
    def gen_count(self) -> int:
        return len(self.generator_names)

    @property
    def letters(self) -> list[int]:
        return all_letters(self.gen_count)

    def format(self, w: Word) -> str:
        return format_word(w, self.generator_names)

    def parse_word(self, text: str) -> Word:
        return _WordParser(text, self.generator_names).parse()

    def digest(self) -> str:
        """Short hash of the canonical form, used in report headers."""
        canon = " ".join(self.generator_names) + "|" + ",".join(
            self.format(r) for r in self.relators
        )
        return hashlib.sha256(canon.encode()).hexdigest()[:12]

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f"# {self.name}")
        lines.append("gens: " + " ".join(self.generator_names))
        lines += [f"rel: {self.format(r)}" for r in self.relators]
        return "\n".join(lines) + "\n"


class _WordParser:
    """Recursive descent over the relator mini-language."""

    def __init__(self, text: str, names):
        self.s = "".join(text.split())
        self.i = 0
        self.index = {n: j for j, n in enumerate(names)}
        self.text = text

    def error(self, msg: str):
        raise PresentationError(f"{msg} in {self.text!r} at offset {self.i}")

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def parse(self) -> Word:
        if not self.s:
            self.error("empty relator")
        lhs = self.word()
        if self.peek() == "=":
            self.i += 1
            rhs = self.word()
            lhs = concat_reduce(lhs, inverse(rhs))
        if self.i != len(self.s):
            self.error(f"unexpected {self.peek()!r}")
        return lhs

    def word(self) -> Word:
        out = EMPTY
        while self.peek() and self.peek() not in "=,)]":
            out = concat_reduce(out, self.term())
        return out

    def term(self) -> Word:
        base = self.atom()
        while self.peek() == "^":
            self.i += 1
            c = self.peek()
            if c == "-" or c.isdigit():
                base = power(base, self.integer())
            else:
                base = conjugate(base, self.atom())
        return base

    def integer(self) -> int:
        j = self.i
        if self.peek() == "-":
            self.i += 1
        while self.peek().isdigit():
            self.i += 1
        try:
            return int(self.s[j : self.i])
        except ValueError:
            self.error("bad exponent")

    def atom(self) -> Word:
        c = self.peek()
        if c == "(":
            self.i += 1
            w = self.word()
            self.expect(")")
            return w
        if c == "[":
            self.i += 1
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return commutator(u, v)
        if c == "1":
            self.i += 1
            return EMPTY
        if c.isalpha():
            self.i += 1
            if c in self.index:
                return (self.index[c] + 1,)
            if c.isupper() and c.lower() in self.index:
                return (-(self.index[c.lower()] + 1),)
            self.error(f"unknown letter {c!r}")
        self.error(f"unexpected {c!r}" if c else "unexpected end")

    def expect(self, c: str):
        if self.peek() != c:
            self.error(f"expected {c!r}")
        self.i += 1


def parse_presentation(text: str, name: str = "") -> Presentation:
    gens: list[str] | None = None
    raw_relators: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep:
            raise PresentationError(f"line {lineno}: expected 'key: value'")
        if key == "gens":
            if gens is not None:
                raise PresentationError(f"line {lineno}: second gens line")
            gens = value.split()
            for g in gens:
                if len(g) != 1 or not g.isalpha() or not g.islower():
                    raise PresentationError(
                        f"line {lineno}: generator names are single lowercase letters, got {g!r}"
                    )
        elif key == "rel":
            if gens is None:
                raise PresentationError(f"line {lineno}: rel before gens")
            raw_relators.append(value)
        elif key == "name":
            name = name or value.strip()
        else:
            raise PresentationError(f"line {lineno}: unknown key {key!r}")
    if not gens:
        raise PresentationError("empty generator list")
    if len(set(gens)) != len(gens):
        raise PresentationError(f"duplicate generator name in {gens}")
    parser_names = tuple(gens)
    relators = []
    for raw in raw_relators:
        r = _WordParser(raw, parser_names).parse()
        if not r:
            raise PresentationError(f"relator {raw.strip()!r} reduces to the empty word")
        relators.append(r)
    return Presentation(parser_names, tuple(relators), name=name, source=text)


def load_presentation(path_or_name: str | Path) -> Presentation:
    """Read a presentation file, falling back to the bundled set by name."""
    p = Path(path_or_name)
    if p.is_file():
        return parse_presentation(p.read_text(encoding="utf-8"), name=p.stem)
    return bundled(str(path_or_name))


def bundled_names() -> list[str]:
    root = resources.files("cogrowth") / "data"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".pres"))


def bundled(name: str) -> Presentation:
    f = resources.files("cogrowth") / "data" / f"{name}.pres"
    if not f.is_file():
        raise PresentationError(
            f"no presentation file {name!r}; bundled: {', '.join(bundled_names())}"
        )
    return parse_presentation(f.read_text(encoding="utf-8"), name=name)


def baumslag_solitar(n: int, m: int) -> Presentation:
    """BS(N,M) = <a, b | a^N b a^-M b^-1>."""
    if n < 1 or m < 1:
        raise PresentationError("BS(N,M) needs N, M >= 1")
    r = free_reduce(power((1,), n) + (2,) + power((1,), -m) + (-2,))
    return Presentation(("a", "b"), (r,), name=f"BS({n},{m})")


@dataclass(frozen=True)
class RelatorTable:
    """The symmetrised relator set with a uniform selection distribution."""

    members: tuple[Word, ...]
    probability: tuple[Fraction, ...]
    gen_count: int

    def __post_init__(self):
        object.__setattr__(self, "_index", {r: i for i, r in enumerate(self.members)})

    def __len__(self):
        return len(self.members)

    def index(self, r: Word) -> int | None:
        return self._index.get(r)

    def inverse_index(self, i: int) -> int:
        return self._index[inverse(self.members[i])]

    @property
    def max_length(self) -> int:
        return max(len(r) for r in self.members)


def relator_closure(p: Presentation) -> RelatorTable:
    seen: dict[Word, None] = {}
    for r in p.relators:
        for base in (r, inverse(r)):
            # rotation order keeps the member list deterministic
            for i in range(len(base)):
                seen.setdefault(free_reduce(base[i:] + base[:i]), None)
    members = tuple(m for m in seen if m)
    prob = Fraction(1, len(members))
    return RelatorTable(members, (prob,) * len(members), p.gen_count)


def is_closed(table: RelatorTable) -> bool:
    """Closure under inversion and reduced cyclic permutation."""
    ms = set(table.members)
    return all(
        inverse(r) in ms and cyclic_permutations(r) <= ms for r in table.members
    )
