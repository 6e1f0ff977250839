"""The term language of the free tangent category over one object.

Grammar (used verbatim by the CLI):

    term    := tensor ('.' tensor)*          composition, right acts first
    tensor  := atom ('*' atom)*
    atom    := generator | '<' term ',' term '>' | '(' term ')'
    gens    : p  0  +  l  c  !{V}  id{V}  proj{i,n}

Objects are written `N`, `W`, `W2`, `W2*W`, ...  Every term is boundary
checked at construction: Compose needs matching middle objects, Pair needs
single-factor targets W_n, W_m (the fibered-sum transverse square) and a
common source, and denotes the induced map into W_{n+m}.

Equality of terms is semantic: evaluate both into W1 and compare generator
images (`terms_equal`).  There is deliberately no rewriting to normal forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Protocol

from . import weil
from .weil import NAT, W, WW, WeilAlgebra, WeilMorphism, parse_algebra


class WTermError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class WTerm:
    source: WeilAlgebra = field(init=False)
    target: WeilAlgebra = field(init=False)


@dataclass(frozen=True)
class Gen(WTerm):
    kind: str
    algebra: WeilAlgebra | None = None
    i: int | None = None
    n: int | None = None

    def __post_init__(self):
        boundaries = {
            "p": (W, NAT),
            "zero": (NAT, W),
            "plus": (WeilAlgebra((2,)), W),
            "ell": (W, WW),
            "flip": (WW, WW),
        }
        if self.kind in boundaries:
            src, tgt = boundaries[self.kind]
        elif self.kind == "bang":
            if self.algebra is None:
                raise WTermError("! needs an algebra annotation, e.g. !{W2}")
            src, tgt = self.algebra, NAT
        elif self.kind == "id":
            if self.algebra is None:
                raise WTermError("id needs an algebra annotation, e.g. id{W}")
            src, tgt = self.algebra, self.algebra
        elif self.kind == "proj":
            if self.i is None or self.n is None or not 1 <= self.i <= self.n:
                raise WTermError(f"bad projection proj{{{self.i},{self.n}}}")
            src, tgt = WeilAlgebra((self.n,)), W
        else:
            raise WTermError(f"unknown generator {self.kind!r}")
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)


@dataclass(frozen=True)
class Id(WTerm):
    """Convenience alias used programmatically; prints as id{V}."""

    algebra: WeilAlgebra

    def __post_init__(self):
        object.__setattr__(self, "source", self.algebra)
        object.__setattr__(self, "target", self.algebra)


@dataclass(frozen=True)
class Compose(WTerm):
    outer: WTerm
    inner: WTerm

    def __post_init__(self):
        if self.inner.target != self.outer.source:
            raise WTermError(
                f"boundary mismatch in composition: inner target {self.inner.target} "
                f"vs outer source {self.outer.source}")
        object.__setattr__(self, "source", self.inner.source)
        object.__setattr__(self, "target", self.outer.target)


@dataclass(frozen=True)
class Tensor(WTerm):
    left: WTerm
    right: WTerm

    def __post_init__(self):
        object.__setattr__(self, "source", self.left.source.tensor(self.right.source))
        object.__setattr__(self, "target", self.left.target.tensor(self.right.target))


@dataclass(frozen=True)
class Pair(WTerm):
    """Induced map into the fibered sum W_{n+m} (a transverse pullback)."""

    left: WTerm
    right: WTerm

    def __post_init__(self):
        if self.left.source != self.right.source:
            raise WTermError(
                f"pairing needs a common source: {self.left.source} vs {self.right.source}")
        for part in (self.left, self.right):
            if part.target.n_factors > 1:
                raise WTermError(
                    f"pairing needs targets of the form W_n, got {part.target}")
        n = self.left.target.widths[0] if self.left.target.widths else 0
        m = self.right.target.widths[0] if self.right.target.widths else 0
        total = WeilAlgebra((n + m,)) if n + m else NAT
        object.__setattr__(self, "source", self.left.source)
        object.__setattr__(self, "target", total)


# -- printing -----------------------------------------------------------------


def print_term(t: WTerm) -> str:
    """Render with the minimal parentheses that re-parse to the same tree."""
    def go(term: WTerm, level: int) -> str:
        # level 0: composition context, 1: tensor context, 2: atom context.
        if isinstance(term, Gen):
            if term.kind == "bang":
                return f"!{{{term.algebra}}}"
            if term.kind == "id":
                return f"id{{{term.algebra}}}"
            if term.kind == "proj":
                return f"proj{{{term.i},{term.n}}}"
            return {"p": "p", "zero": "0", "plus": "+", "ell": "l", "flip": "c"}[term.kind]
        if isinstance(term, Id):
            return f"id{{{term.algebra}}}"
        if isinstance(term, Pair):
            return f"<{go(term.left, 0)}, {go(term.right, 0)}>"
        if isinstance(term, Compose):
            body = f"{go(term.outer, 1)} . {go(term.inner, 0)}"
            return f"({body})" if level >= 1 else body
        if isinstance(term, Tensor):
            body = f"{go(term.left, 2)} * {go(term.right, 1)}"
            return f"({body})" if level >= 2 else body
        raise WTermError(f"unknown term node {term!r}")

    return go(t, 0)


# -- parsing ------------------------------------------------------------------


class _TermParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise WTermError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def braced_algebra(self) -> WeilAlgebra:
        self.expect("{")
        start = self.pos
        depth = 0
        while self.pos < len(self.text) and (self.text[self.pos] != "}" or depth):
            self.pos += 1
        if self.pos >= len(self.text):
            self.error("unterminated '{'")
        body = self.text[start:self.pos]
        self.pos += 1
        try:
            return parse_algebra(body)
        except weil.WeilError as exc:
            raise WTermError(str(exc), start)

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a number")
        return int(self.text[start:self.pos])

    def atom(self) -> WTerm:
        ch = self.peek()
        pos = self.pos
        try:
            if ch == "(":
                self.expect("(")
                t = self.term()
                self.expect(")")
                return t
            if ch == "<":
                self.expect("<")
                left = self.term()
                self.expect(",")
                right = self.term()
                self.expect(">")
                return Pair(left, right)
            if ch == "p":
                self.pos += 1
                if self.text[self.pos:self.pos + 3] == "roj":
                    self.pos += 3
                    self.expect("{")
                    i = self.nat()
                    self.expect(",")
                    n = self.nat()
                    self.expect("}")
                    return Gen("proj", i=i, n=n)
                return Gen("p")
            if ch == "0":
                self.pos += 1
                return Gen("zero")
            if ch == "+":
                self.pos += 1
                return Gen("plus")
            if ch == "l":
                self.pos += 1
                return Gen("ell")
            if ch == "c":
                self.pos += 1
                return Gen("flip")
            if ch == "!":
                self.pos += 1
                return Gen("bang", algebra=self.braced_algebra())
            if ch == "i" and self.text[self.pos:self.pos + 2] == "id":
                self.pos += 2
                return Gen("id", algebra=self.braced_algebra())
        except WTermError:
            raise
        except ValueError as exc:
            raise WTermError(str(exc), pos)
        self.error("expected a term")

    def tensor(self) -> WTerm:
        parts = [self.atom()]
        positions = []
        while self.peek() == "*":
            self.expect("*")
            positions.append(self.pos)
            parts.append(self.atom())
        t = parts[-1]
        for part, pos in zip(reversed(parts[:-1]), reversed(positions)):
            try:
                t = Tensor(part, t)
            except ValueError as exc:
                raise WTermError(str(exc), pos)
        return t

    def term(self) -> WTerm:
        parts = [self.tensor()]
        positions = []
        while self.peek() == ".":
            self.expect(".")
            positions.append(self.pos)
            parts.append(self.tensor())
        t = parts[-1]
        for part, pos in zip(reversed(parts[:-1]), reversed(positions)):
            try:
                t = Compose(part, t)
            except ValueError as exc:
                raise WTermError(str(exc), pos)
        return t


def parse_term(text: str) -> WTerm:
    parser = _TermParser(text)
    t = parser.term()
    parser.skip_ws()
    if parser.pos != len(text):
        parser.error("trailing input")
    return t


# -- evaluation ---------------------------------------------------------------


def eval_weil(t: WTerm) -> WeilMorphism:
    """The denoted rig morphism in W1."""
    if isinstance(t, Gen):
        if t.kind in ("bang", "id"):
            return weil.generator(t.kind, algebra=t.algebra)
        if t.kind == "proj":
            return weil.generator("proj", i=t.i, n=t.n)
        return weil.generator(t.kind)
    if isinstance(t, Id):
        return weil.identity_morphism(t.algebra)
    if isinstance(t, Compose):
        return weil.compose_morphisms(eval_weil(t.outer), eval_weil(t.inner))
    if isinstance(t, Tensor):
        return weil.tensor_morphisms(eval_weil(t.left), eval_weil(t.right))
    if isinstance(t, Pair):
        return weil.fibered_pair(eval_weil(t.left), eval_weil(t.right))
    raise WTermError(f"unknown term node {t!r}")


def terms_equal(t1: WTerm, t2: WTerm) -> bool:
    """Equality of W1 denotations; boundaries must agree."""
    if t1.source != t2.source or t1.target != t2.target:
        raise WTermError(
            f"boundary mismatch: {t1.source}->{t1.target} vs {t2.source}->{t2.target}")
    return weil.morphisms_equal(eval_weil(t1), eval_weil(t2))


class ModelInterface(Protocol):
    """What a tangent model must supply to evaluate terms.

    `tensor` receives the sub-terms as well as their evaluations because a
    strict model implements f ⊗ g by whiskering, which needs the W1
    boundaries (and possibly the W1 denotation) of the factors.
    """

    def object_of(self, algebra: WeilAlgebra): ...

    def generator_map(self, term: Gen): ...

    def compose(self, outer, inner): ...

    def tensor(self, left_term: WTerm, left_mor, right_term: WTerm, right_mor): ...

    def pair(self, left_term: WTerm, left_mor, right_term: WTerm, right_mor): ...

    def identity(self, algebra: WeilAlgebra): ...


class UnsupportedLimit(ValueError):
    """Raised by models that cannot interpret a required fiber product."""


def eval_model(t: WTerm, model: ModelInterface):
    """Evaluate a term in any model, structurally."""
    if isinstance(t, Gen):
        return model.generator_map(t)
    if isinstance(t, Id):
        return model.identity(t.algebra)
    if isinstance(t, Compose):
        return model.compose(eval_model(t.outer, model), eval_model(t.inner, model))
    if isinstance(t, Tensor):
        return model.tensor(t.left, eval_model(t.left, model),
                            t.right, eval_model(t.right, model))
    if isinstance(t, Pair):
        return model.pair(t.left, eval_model(t.left, model),
                          t.right, eval_model(t.right, model))
    raise WTermError(f"unknown term node {t!r}")


# -- random terms and sound rewriting ----------------------------------------


def identity_term(algebra: WeilAlgebra) -> WTerm:
    return Gen("id", algebra=algebra)


_ATOMS = [
    "p", "0", "+", "l", "c", "id{W}", "id{N}", "id{W*W}", "proj{1,2}",
    "proj{2,2}", "!{W}", "!{W2}", "<p, p>", "<0 . !{W}, id{W}>",
]


def random_term(rng: random.Random, depth: int = 3) -> WTerm:
    """A random boundary-correct term (grown by retrying compositions)."""
    if depth <= 0:
        return parse_term(rng.choice(_ATOMS))
    for _ in range(30):
        shape = rng.randrange(3)
        try:
            if shape == 0:
                return Compose(random_term(rng, depth - 1), random_term(rng, depth - 1))
            if shape == 1:
                return Tensor(random_term(rng, depth - 1), random_term(rng, depth - 1))
            return Pair(random_term(rng, depth - 1), random_term(rng, depth - 1))
        except ValueError:
            continue
    return parse_term(rng.choice(_ATOMS))


# Sound bidirectional rewrites: each pair denotes the same W1 morphism
# whenever the boundaries line up.  Used to manufacture syntactically
# different terms with equal denotations.
def _rewrite_once(t: WTerm, rng: random.Random) -> WTerm:
    choice = rng.randrange(8)
    if choice == 0:
        # f  ->  f . id
        return Compose(t, identity_term(t.source))
    if choice == 1:
        # f  ->  id . f
        return Compose(identity_term(t.target), t)
    if choice == 2 and isinstance(t, Compose):
        # associativity shuffle
        if isinstance(t.inner, Compose):
            return Compose(Compose(t.outer, t.inner.outer), t.inner.inner)
        if isinstance(t.outer, Compose):
            return Compose(t.outer.outer, Compose(t.outer.inner, t.inner))
    if choice == 3 and isinstance(t, Tensor):
        # interchange: (f.g) * (h.k) <-> (f*h) . (g*k)
        if isinstance(t.left, Compose) and isinstance(t.right, Compose):
            return Compose(Tensor(t.left.outer, t.right.outer),
                           Tensor(t.left.inner, t.right.inner))
    if choice == 4 and isinstance(t, Compose):
        if isinstance(t.outer, Tensor) and isinstance(t.inner, Tensor) and \
                t.outer.left.source == t.inner.left.target and \
                t.outer.right.source == t.inner.right.target:
            return Tensor(Compose(t.outer.left, t.inner.left),
                          Compose(t.outer.right, t.inner.right))
    if choice == 5 and t.source == W and t.target == W:
        # f = + . <0 . !, f>   (left unit law)
        bang = Gen("bang", algebra=W)
        return Compose(Gen("plus"), Pair(Compose(Gen("zero"), bang), t))
    if choice == 6 and isinstance(t, Compose) and isinstance(t.outer, Compose):
        # c . c . f -> f style cancellations arise from flip . flip = id
        pass
    if choice == 7:
        # f -> c . c . f when f targets W*W;  f -> f . (c . c) when it starts there
        if t.target == WW:
            return Compose(Gen("flip"), Compose(Gen("flip"), t))
        if t.source == WW:
            return Compose(t, Compose(Gen("flip"), Gen("flip")))
    # Recurse into one child when the top level offered nothing.
    if isinstance(t, Compose):
        if rng.random() < 0.5:
            return Compose(_rewrite_once(t.outer, rng), t.inner)
        return Compose(t.outer, _rewrite_once(t.inner, rng))
    if isinstance(t, Tensor):
        if rng.random() < 0.5:
            return Tensor(_rewrite_once(t.left, rng), t.right)
        return Tensor(t.left, _rewrite_once(t.right, rng))
    if isinstance(t, Pair):
        if rng.random() < 0.5:
            return Pair(_rewrite_once(t.left, rng), t.right)
        return Pair(t.left, _rewrite_once(t.right, rng))
    return t


def random_equal_pair(rng: random.Random, depth: int = 3,
                      rewrites: int = 3) -> tuple[WTerm, WTerm]:
    """Two syntactically different terms with the same W1 denotation."""
    base = random_term(rng, depth)
    other = base
    for _ in range(rewrites):
        other = _rewrite_once(other, rng)
    return base, other
