"""Permutation groups small enough to enumerate.

Composition is "right factor first" throughout: ``(p * r)(x) == p(r(x))``.
Points of the wreath-type action are labelled ``t * q + x`` for the pair
``(x, t)`` with ``x`` in Z/(q) and ``t`` a block (strand) index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import ResidueVector

DEFAULT_GROUP_CAP = 10**7


class StructureError(ValueError):
    """A permutation does not have the block/translation shape it was assumed to have."""


class GroupTooLarge(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"group closure exceeded the cap of {cap} elements")
        self.cap = cap


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def transposition(cls, degree: int, i: int, j: int) -> "Permutation":
        img = list(range(degree))
        img[i], img[j] = j, i
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        out = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def compose(p: Permutation, r: Permutation) -> Permutation:
    """``p`` after ``r``."""
    if p.degree != r.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {r.degree}")
    pi = p.images
    return Permutation(tuple(pi[x] for x in r.images))


def _compose_raw(p: tuple, r: tuple) -> tuple:
    return tuple(p[x] for x in r)


@dataclass(frozen=True)
class PermutationGroup:
    degree: int
    generators: tuple[Permutation, ...]
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Permutation) -> bool:
        return g.images in self.elements

    def __iter__(self):
        for img in sorted(self.elements):
            yield Permutation(img)

    def __len__(self):
        return len(self.elements)


def closure(gens: Sequence[Permutation], cap: int = DEFAULT_GROUP_CAP) -> frozenset:
    degree = gens[0].degree
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    raw = [g.images for g in gens]
    while frontier:
        nxt = []
        for h in frontier:
            for g in raw:
                k = _compose_raw(g, h)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > cap:
                        raise GroupTooLarge(cap)
                    nxt.append(k)
        frontier = nxt
    return frozenset(seen)


def generate(gens: Sequence[Permutation], cap: int = DEFAULT_GROUP_CAP) -> PermutationGroup:
    """Enumerate the group generated by ``gens`` by breadth-first multiplication."""
    gens = tuple(gens)
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators of different degrees")
    return PermutationGroup(degree, gens, closure(gens, cap))


@dataclass(frozen=True)
class BlockMap:
    """Partition of ``degree`` points into ``n`` blocks."""

    degree: int
    n: int
    block_of: tuple[int, ...]

    def __post_init__(self):
        if len(self.block_of) != self.degree:
            raise ValueError("block_of must have one entry per point")
        if set(self.block_of) != set(range(self.n)):
            raise ValueError("every block must be nonempty")

    @classmethod
    def wreath(cls, n: int, q: int) -> "BlockMap":
        return cls(q * n, n, tuple(p // q for p in range(q * n)))

    @classmethod
    def singletons(cls, n: int) -> "BlockMap":
        return cls(n, n, tuple(range(n)))

    def members(self, block: int) -> list[int]:
        return [p for p, b in enumerate(self.block_of) if b == block]


def block_projection(g: Permutation, blocks: BlockMap) -> Permutation:
    """The permutation ``g`` induces on the blocks."""
    image = [None] * blocks.n
    for p, b in enumerate(blocks.block_of):
        target = blocks.block_of[g(p)]
        if image[b] is None:
            image[b] = target
        elif image[b] != target:
            raise StructureError(f"block {b} is split by the permutation")
    try:
        return Permutation(tuple(image))
    except ValueError as exc:
        raise StructureError("blocks are not permuted bijectively") from exc


def kernel(G: PermutationGroup, blocks: BlockMap) -> list[Permutation]:
    """Elements of ``G`` fixing every block setwise."""
    for g in G.generators:
        block_projection(g, blocks)
    return [g for g in G if block_projection(g, blocks).is_identity()]


@dataclass(frozen=True)
class TranslationVector:
    vector: ResidueVector


def translation(vector: ResidueVector) -> Permutation:
    """The permutation ``(x, t) -> (x + vector[t], t)``."""
    q = vector.modulus
    return Permutation(
        tuple(t * q + (x + vector[t]) % q for t in range(len(vector)) for x in range(q))
    )


def decode_translation(k: Permutation, blocks: BlockMap, q: int) -> TranslationVector:
    """Read off the shift constants of a block-wise translation."""
    n = blocks.n
    if k.degree != q * n:
        raise StructureError(f"degree {k.degree} is not q*n = {q * n}")
    shifts = []
    for t in range(n):
        base = t * q
        if k(base) // q != t:
            raise StructureError(f"block {t} is moved")
        c = k(base) - base
        for x in range(q):
            if k(base + x) != base + (x + c) % q:
                raise StructureError(f"block {t} is not shifted uniformly")
        shifts.append(c)
    return TranslationVector(ResidueVector(tuple(shifts), q))


def conjugation_action(g: Permutation, k: Permutation, blocks: BlockMap, q: int) -> TranslationVector:
    """Translation vector of ``g k g^-1``."""
    return decode_translation(g * k * g.inverse(), blocks, q)


def is_abelian(elements: Iterable[Permutation]) -> bool:
    elements = list(elements)
    for i, a in enumerate(elements):
        for b in elements[i + 1 :]:
            if a * b != b * a:
                return False
    return True
