"""Problem files: a line-oriented ``key: value`` format describing one GCA.

Example::

    # XOR rule
    dimension: 1
    group: cyclic 2
    neighbors: [(0), (1)]
    homs: [identity, identity]

See ``docs/problem-format.md`` for the full grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import GcadecError, GroupError, HomomorphismError, RuleError
from .gca import make_gca
from .groups.core import NAMED, PermGroup, ProductGroup, TableGroup, make_group
from .groups.homs import check_homomorphism, conjugation, constant_e, identity_map, power_map

KEYS = ("dimension", "group", "neighbors", "homs")
GROUP_KINDS = ("cyclic", "symmetric", "alternating", "dihedral", "product", "table", "perm")


class ProblemError(GcadecError):
    """Input error with a 1-based source position."""

    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)
        self.message = message


# -- values -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z_][A-Za-z0-9_]*)|(->)|([\[\](),]))")


@dataclass
class Token:
    kind: str   # int | name | arrow | punct | end
    value: object
    col: int


def tokenize(text, line=1, col0=1):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text[pos:]) - len(text[pos:].lstrip())
            raise ProblemError(f"unexpected character {text[pos + bad]!r}", line, col0 + pos + bad)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(Token("int", int(m.group(1)), col0 + start))
        elif m.group(2) is not None:
            tokens.append(Token("name", m.group(2), col0 + start))
        elif m.group(3) is not None:
            tokens.append(Token("arrow", "->", col0 + start))
        else:
            tokens.append(Token("punct", m.group(4), col0 + start))
        pos = m.end()
    tokens.append(Token("end", None, col0 + len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, line):
        self.toks = tokens
        self.i = 0
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ProblemError(msg, self.line, tok.col)

    def expect(self, value):
        t = self.take()
        if t.value != value:
            raise self.error(f"expected {value!r}", t)
        return t

    def done(self):
        if self.peek().kind != "end":
            raise self.error("unexpected trailing input")

    def integer(self):
        t = self.take()
        if t.kind != "int":
            raise self.error("expected an integer", t)
        return t.value

    def element(self):
        """Integer id, or a parenthesized tuple of elements (for product groups)."""
        t = self.peek()
        if t.kind == "int":
            return self.take().value
        if t.value == "(":
            return tuple(self.sequence("(", ")", self.element))
        raise self.error("expected an element")

    def sequence(self, open_, close, item):
        self.expect(open_)
        out = []
        if self.peek().value == close:
            self.take()
            return out
        while True:
            out.append(item())
            t = self.take()
            if t.value == close:
                return out
            if t.value != ",":
                raise self.error(f"expected ',' or {close!r}", t)

    def located(self, item):
        def wrapped():
            col = self.peek().col
            return item(), col
        return wrapped


# -- group and hom specs ----------------------------------------------------

def _parse_group(p):
    t = p.take()
    if t.kind != "name":
        raise p.error("expected a group description", t)
    if t.value in NAMED:
        return ("named", t.value)
    kind = t.value
    if kind not in GROUP_KINDS:
        raise p.error(f"unknown group {kind!r}", t)
    if kind in ("cyclic", "symmetric", "alternating", "dihedral"):
        n = p.integer()
        if n < 1:
            raise p.error(f"{kind} group needs a positive parameter", t)
        return (kind, n)
    if kind == "product":
        parts = p.sequence("[", "]", lambda: _parse_group(p))
        if not parts:
            raise p.error("product needs at least one factor", t)
        return ("product", tuple(parts))
    if kind == "table":
        rows = p.sequence("[", "]", lambda: tuple(p.sequence("[", "]", p.integer)))
        return ("table", tuple(rows))
    degree = p.integer()
    gens = p.sequence("[", "]", lambda: tuple(p.sequence("(", ")", p.integer)))
    return ("perm", degree, tuple(gens))


def _parse_hom(p):
    t = p.take()
    if t.kind != "name":
        raise p.error("expected a homomorphism", t)
    kind = t.value
    if kind in ("identity", "constant_e"):
        return (kind,)
    if kind == "power":
        return ("power", p.integer())
    if kind == "conj":
        return ("conj", p.element())
    if kind == "map":
        return ("map", tuple(p.sequence("[", "]", p.element)))
    if kind == "gens":
        def pair():
            g = p.element()
            p.expect("->")
            return (g, p.element())
        return ("gens", tuple(p.sequence("[", "]", pair)))
    raise p.error(f"unknown homomorphism {kind!r}", t)


def _parse_offset(p):
    if p.peek().kind == "int":
        return (p.integer(),)
    return tuple(p.sequence("(", ")", p.integer))


# -- problem files ----------------------------------------------------------

@dataclass
class ProblemFile:
    dimension: int
    group: tuple
    neighbors: list
    homs: list
    positions: dict = field(default_factory=dict, compare=False, repr=False)

    def build_group(self):
        try:
            return build_group(self.group)
        except GroupError as exc:
            raise ProblemError(str(exc), *self.positions.get("group", (None, None))) from exc

    def build(self):
        """The validated GCA described by this file."""
        group = self.build_group()
        for k, u in enumerate(self.neighbors):
            if len(u) != self.dimension:
                line, cols = self.positions.get("neighbors", (None, []))
                raise ProblemError(
                    f"offset arity mismatch: neighbor {u} has {len(u)} coordinates, dimension is "
                    f"{self.dimension}", line, cols[k] if k < len(cols) else None)
        homs = []
        for k, spec in enumerate(self.homs):
            try:
                homs.append(build_hom(group, spec))
            except (GroupError, HomomorphismError, ValueError, IndexError) as exc:
                line, cols = self.positions.get("homs", (None, []))
                raise ProblemError(f"homomorphism {k + 1}: {exc}", line,
                                   cols[k] if k < len(cols) else None) from exc
        try:
            return make_gca(group, self.neighbors, homs, dim=self.dimension)
        except RuleError as exc:
            line, _ = self.positions.get("homs", (None, []))
            raise ProblemError(str(exc), line, 1) from exc

    def serialize(self):
        return "\n".join([
            f"dimension: {self.dimension}",
            f"group: {format_group(self.group)}",
            "neighbors: [" + ", ".join(format_offset(u) for u in self.neighbors) + "]",
            "homs: [" + ", ".join(format_hom(h) for h in self.homs) + "]",
        ]) + "\n"


def _logical_lines(text):
    """Yield ``(line_no, col, key, value)``; a value continues while brackets are open."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i]
        stripped = raw.split("#", 1)[0]
        if not stripped.strip():
            i += 1
            continue
        if ":" not in stripped:
            raise ProblemError("expected 'key: value'", i + 1, len(raw) - len(raw.lstrip()) + 1)
        key, value = stripped.split(":", 1)
        col = len(key) + 2
        start = i
        depth = value.count("[") + value.count("(") - value.count("]") - value.count(")")
        while depth > 0 and i + 1 < len(lines):
            i += 1
            more = lines[i].split("#", 1)[0]
            value += " " + more
            depth += more.count("[") + more.count("(") - more.count("]") - more.count(")")
        yield start + 1, col, key.strip(), value
        i += 1


def parse(text):
    """Parse problem text into a ``ProblemFile``; raises ``ProblemError`` with a position."""
    found = {}
    positions = {}
    for line, col, key, value in _logical_lines(text):
        if key not in KEYS:
            raise ProblemError(f"unknown key {key!r}", line, 1)
        if key in found:
            raise ProblemError(f"duplicate key {key!r}", line, 1)
        p = _Parser(tokenize(value, line, col), line)
        if key == "dimension":
            d = p.integer()
            if d < 1:
                raise ProblemError("dimension must be positive", line, col)
            found[key] = d
            positions[key] = (line, col)
        elif key == "group":
            found[key] = _parse_group(p)
            positions[key] = (line, col)
        elif key == "neighbors":
            items = p.sequence("[", "]", p.located(lambda: _parse_offset(p)))
            found[key] = [u for u, _ in items]
            positions[key] = (line, [c for _, c in items])
        else:
            items = p.sequence("[", "]", p.located(lambda: _parse_hom(p)))
            found[key] = [h for h, _ in items]
            positions[key] = (line, [c for _, c in items])
        p.done()
    for key in KEYS:
        if key not in found:
            raise ProblemError(f"missing key {key!r}")
    if not found["neighbors"]:
        raise ProblemError("neighbors list is empty", positions["neighbors"][0], 1)
    if len(found["neighbors"]) != len(found["homs"]):
        raise ProblemError(
            f"arity mismatch: {len(found['neighbors'])} neighbors but {len(found['homs'])} homs",
            positions["homs"][0], 1)
    return ProblemFile(found["dimension"], found["group"], found["neighbors"], found["homs"], positions)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- building ---------------------------------------------------------------

def build_group(spec):
    kind = spec[0]
    if kind == "named":
        return make_group(spec[1])
    if kind == "product":
        return ProductGroup([build_group(s) for s in spec[1]])
    if kind == "table":
        g = TableGroup([list(r) for r in spec[1]])
        if g.identity != 0:
            raise GroupError(f"table row 0 must be the identity (found it at row {g.identity})")
        return g
    if kind == "perm":
        return PermGroup(spec[1], [list(g) for g in spec[2]])
    return make_group((kind, spec[1]))


def element_id(group, value):
    """Resolve an element literal: an id, or a coordinate tuple for product groups."""
    if isinstance(value, tuple):
        if not isinstance(group, ProductGroup) or len(value) != len(group.factors):
            raise GroupError(f"tuple element {value} does not match the group structure")
        return group.element([element_id(f, v) for f, v in zip(group.factors, value)])
    if not 0 <= value < group.order:
        raise GroupError(f"element {value} is outside the group (order {group.order})")
    return int(value)


def hom_from_pairs(group, pairs):
    """Endomorphism from images of a generating set, checked for consistency."""
    gens = [g for g, _ in pairs]
    imgs = [x for _, x in pairs]
    images = np.full(group.order, -1, dtype=np.int64)
    images[group.identity] = group.identity
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, a in zip(gens, imgs):
                y = group.mul(x, g)
                val = group.mul(int(images[x]), a)
                if images[y] < 0:
                    images[y] = val
                    nxt.append(y)
                elif images[y] != val:
                    raise HomomorphismError(f"generator images are inconsistent at element {y}")
        frontier = nxt
    if (images < 0).any():
        raise HomomorphismError("listed elements do not generate the group")
    return check_homomorphism(group, images)


def build_hom(group, spec):
    kind = spec[0]
    if kind == "identity":
        return identity_map(group)
    if kind == "constant_e":
        return constant_e(group)
    if kind == "power":
        h = power_map(group, spec[1])
        return check_homomorphism(group, h.images)
    if kind == "conj":
        return conjugation(group, element_id(group, spec[1]))
    if kind == "map":
        if len(spec[1]) != group.order:
            raise HomomorphismError(f"map lists {len(spec[1])} images, group has order {group.order}")
        return check_homomorphism(group, [element_id(group, v) for v in spec[1]])
    if kind == "gens":
        pairs = [(element_id(group, g), element_id(group, x)) for g, x in spec[1]]
        return hom_from_pairs(group, pairs)
    raise HomomorphismError(f"unknown homomorphism {kind!r}")


# -- formatting -------------------------------------------------------------

def format_element(v):
    if isinstance(v, tuple):
        return "(" + ", ".join(format_element(x) for x in v) + ")"
    return str(v)


def format_offset(u):
    return "(" + ", ".join(str(x) for x in u) + ")"


def format_group(spec):
    kind = spec[0]
    if kind == "named":
        return spec[1]
    if kind == "product":
        return "product [" + ", ".join(format_group(s) for s in spec[1]) + "]"
    if kind == "table":
        return "table [" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in spec[1]) + "]"
    if kind == "perm":
        return f"perm {spec[1]} [" + ", ".join(format_offset(g) for g in spec[2]) + "]"
    return f"{kind} {spec[1]}"


def format_hom(spec):
    kind = spec[0]
    if kind in ("identity", "constant_e"):
        return kind
    if kind == "power":
        return f"power {spec[1]}"
    if kind == "conj":
        return f"conj {format_element(spec[1])}"
    if kind == "map":
        return "map [" + ", ".join(format_element(v) for v in spec[1]) + "]"
    return "gens [" + ", ".join(f"{format_element(g)} -> {format_element(x)}" for g, x in spec[1]) + "]"
