"""Splitting of braid-like extensions of the symmetric group.

Setting: ``0 -> A -> G -> S_n -> 1`` where ``G`` is generated by
``g_1, ..., g_{n-1}`` satisfying the braid relations and mapping onto the
Coxeter generators of ``S_n``.  The abelian kernel ``A`` is given as the row
span of ``submodule_gens`` inside ``(Z/q)^m``; conjugation by ``g_s`` acts on
it through the involution matrix ``iota_s`` (acting on column vectors), and
``f_s = g_s^2`` lies in ``A``.

The extension splits iff one can choose ``a_s`` in ``A`` such that the
elements ``g_s a_s`` satisfy the Coxeter presentation of ``S_n``.  Writing
``J_s = iota_s + 1`` and ``I_r = iota_r iota_{r+1} iota_r + iota_r + iota_{r+1}``
the involution and braid conditions become the linear system::

    J_s(a_s) = -f_s                      s = 1 .. n-1
    I_r(a_r - a_{r+1}) = 0               r = 1 .. n-2

Far commutation (``|s - t| >= 2``) is not part of that system, so it is
checked separately on every candidate section.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence, Union

from .linalg import (
    Insolvable,
    ResidueMatrix,
    ResidueVector,
    Solution,
    in_row_space,
    smith_normal_form,
    solve_mod,
    verify_outcome,
)
from .permgroup import BlockMap, Permutation, translation


class ModuleError(ValueError):
    """Action matrices or extension data violate a structural invariant."""


class SectionError(RuntimeError):
    """A solution of the augmented system failed the section check."""


def _mul(x, y):
    if isinstance(x, ResidueMatrix):
        return x @ y
    return x * y


def check_braid_relations(gens: Sequence[Any], mul: Optional[Callable] = None) -> bool:
    """Adjacent braid relations and far commutation for ``gens[0..n-2]``."""
    if len(gens) < 1:
        raise ValueError("need at least one generator")
    mul = mul or _mul
    for s in range(len(gens) - 1):
        a, b = gens[s], gens[s + 1]
        if mul(mul(a, b), a) != mul(mul(b, a), b):
            return False
    for s, t in itertools.combinations(range(len(gens)), 2):
        if t - s >= 2 and mul(gens[s], gens[t]) != mul(gens[t], gens[s]):
            return False
    return True


@dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators; letter ``+s``/``-s`` is ``sigma_s^{+1}``/``sigma_s^{-1}``."""

    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if x == 0 or abs(x) > self.n - 1:
                raise ValueError(f"generator index {x} out of range for n={self.n}")
        object.__setattr__(self, "letters", letters)


def evaluate_braid_word(word: BraidWord, gens: Sequence[Permutation], check: bool = True) -> Permutation:
    """Image of ``word`` under ``sigma_s -> gens[s-1]``; letters are multiplied left to right."""
    if len(gens) != word.n - 1:
        raise ValueError(f"expected {word.n - 1} generators, got {len(gens)}")
    if check and gens and not check_braid_relations(gens):
        raise ValueError("generators do not satisfy the braid relations")
    out = Permutation.identity(gens[0].degree) if gens else None
    for x in word.letters:
        g = gens[abs(x) - 1]
        out = out * (g if x > 0 else g.inverse())
    return out


@dataclass(frozen=True)
class SigmaModule:
    """Submodule ``A`` of ``(Z/q)^m`` with an action of the Coxeter generators of ``S_n``."""

    n: int
    q: int
    rank: int
    action: tuple[ResidueMatrix, ...]
    submodule_gens: ResidueMatrix

    def __post_init__(self):
        object.__setattr__(self, "action", tuple(self.action))
        if self.n < 2:
            raise ModuleError("n must be at least 2")
        if len(self.action) != self.n - 1:
            raise ModuleError(f"need {self.n - 1} action matrices, got {len(self.action)}")
        ident = ResidueMatrix.identity(self.rank, self.q)
        for s, iota in enumerate(self.action, 1):
            if iota.modulus != self.q or iota.shape != (self.rank, self.rank):
                raise ModuleError(f"iota_{s} must be {self.rank}x{self.rank} over Z/{self.q}")
            if iota @ iota != ident:
                raise ModuleError(f"iota_{s} is not an involution")
        if not check_braid_relations(self.action):
            raise ModuleError("action matrices violate the braid relations")
        gens = self.submodule_gens
        if gens.modulus != self.q or gens.cols != self.rank or gens.rows < 1:
            raise ModuleError("submodule generators must be a nonempty k x rank matrix over Z/q")
        for s, iota in enumerate(self.action, 1):
            for v in gens.row_vectors():
                if not in_row_space(gens, iota @ v):
                    raise ModuleError(f"iota_{s} does not preserve the submodule")

    def iota(self, s: int) -> ResidueMatrix:
        if not 1 <= s <= self.n - 1:
            raise IndexError(f"s={s} outside 1..{self.n - 1}")
        return self.action[s - 1]

    @property
    def k(self) -> int:
        return self.submodule_gens.rows

    def order(self) -> int:
        """Number of elements of the submodule, read off the Smith form of the generators."""
        size = 1
        for d in smith_normal_form(self.submodule_gens.lift()).diagonal:
            size *= self.q // math.gcd(d, self.q)
        return size

    def contains(self, v: ResidueVector) -> bool:
        return in_row_space(self.submodule_gens, v)

    def elements(self) -> list[ResidueVector]:
        """Distinct elements of the submodule, in lexicographic order of generator coefficients.

        An element appears at the position of its lexicographically least
        coefficient tuple.
        """
        q = self.q
        suffixes: dict[tuple, None] = {(0,) * self.rank: None}
        for g in reversed(self.submodule_gens.entries):
            level: dict[tuple, None] = {}
            for c in range(q):
                shift = tuple(c * x % q for x in g)
                for v in suffixes:
                    level.setdefault(tuple((a + b) % q for a, b in zip(shift, v)), None)
            suffixes = level
        return [ResidueVector(v, q) for v in suffixes]


def operator_J(module: SigmaModule, s: int) -> ResidueMatrix:
    return module.iota(s) + ResidueMatrix.identity(module.rank, module.q)


def operator_I(module: SigmaModule, r: int) -> ResidueMatrix:
    if not 1 <= r <= module.n - 2:
        raise IndexError(f"r={r} outside 1..{module.n - 2}")
    a, b = module.iota(r), module.iota(r + 1)
    aba = a @ b @ a
    if aba != b @ a @ b:
        raise ModuleError(f"braid identity fails for iota_{r}, iota_{r + 1}")
    return aba + a + b


@dataclass(frozen=True)
class Realization:
    """Concrete permutation generators of ``G`` whose kernel translations are ``A``."""

    generators: tuple[Permutation, ...]
    blocks: BlockMap
    q: int


@dataclass(frozen=True)
class ExtensionData:
    module: SigmaModule
    f: tuple[ResidueVector, ...]
    realization: Optional[Realization] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        mod = self.module
        if len(self.f) != mod.n - 1:
            raise ModuleError(f"need {mod.n - 1} vectors f_s, got {len(self.f)}")
        for s, fs in enumerate(self.f, 1):
            if fs.modulus != mod.q or len(fs) != mod.rank:
                raise ModuleError(f"f_{s} has the wrong shape or modulus")
            if not mod.contains(fs):
                raise ModuleError(f"f_{s} is not in the submodule")
            if mod.iota(s) @ fs != fs:
                raise ModuleError(f"iota_{s}(f_{s}) != f_{s}")

    @property
    def n(self) -> int:
        return self.module.n

    @property
    def q(self) -> int:
        return self.module.q


@dataclass(frozen=True)
class SplitSystem:
    """The assembled system; unknowns are generator coefficients ``c_1 .. c_{n-1}``."""

    M: ResidueMatrix
    b: ResidueVector
    n: int
    rank: int
    k: int
    far_commutation: bool = False

    @property
    def block_rows(self) -> list[str]:
        labels = [f"J{s}" for s in range(1, self.n)] + [f"I{r}" for r in range(1, self.n - 1)]
        if self.far_commutation:
            labels += [f"C{s},{t}" for s, t in _far_pairs(self.n)]
        return labels

    def section(self, x: ResidueVector, module: SigmaModule) -> tuple[ResidueVector, ...]:
        """Turn a solution vector into the elements ``a_s``."""
        gt = module.submodule_gens.transpose()
        k = self.k
        return tuple(
            gt @ ResidueVector(x.coords[i * k : (i + 1) * k], x.modulus) for i in range(self.n - 1)
        )


def _far_pairs(n: int) -> list[tuple[int, int]]:
    return [(s, t) for s in range(1, n) for t in range(s + 2, n)]


def assemble_split_system(ext: ExtensionData, far_commutation: bool = False) -> SplitSystem:
    """Build ``M x = b`` whose solutions are the sections of the extension's generator lifts.

    With ``far_commutation=True`` rows enforcing ``iota_t(a_s) + a_t = iota_s(a_t) + a_s``
    for ``|s - t| >= 2`` are appended.
    """
    mod = ext.module
    n, m, q, k = mod.n, mod.rank, mod.q, mod.k
    gt = mod.submodule_gens.transpose()
    zero = ResidueMatrix.zeros(m, k, q)
    blocks: list[list[ResidueMatrix]] = []
    rhs: list[int] = []
    for s in range(1, n):
        row = [zero] * (n - 1)
        row[s - 1] = operator_J(mod, s) @ gt
        blocks.append(row)
        rhs.extend((-ext.f[s - 1]).coords)
    for r in range(1, n - 1):
        ig = operator_I(mod, r) @ gt
        row = [zero] * (n - 1)
        row[r - 1] = ig
        row[r] = -ig
        blocks.append(row)
        rhs.extend([0] * m)
    if far_commutation:
        ident = ResidueMatrix.identity(m, q)
        for s, t in _far_pairs(n):
            row = [zero] * (n - 1)
            row[s - 1] = (mod.iota(t) - ident) @ gt
            row[t - 1] = -((mod.iota(s) - ident) @ gt)
            blocks.append(row)
            rhs.extend([0] * m)
    M = ResidueMatrix.vstack([ResidueMatrix.hstack(row) for row in blocks])
    return SplitSystem(M, ResidueVector(tuple(rhs), q), n, m, k, far_commutation)


@dataclass(frozen=True)
class SectionCheck:
    involution: tuple[bool, ...]
    braid: tuple[bool, ...]
    far_commutation: tuple[bool, ...]
    realized: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return (
            all(self.involution)
            and all(self.braid)
            and all(self.far_commutation)
            and self.realized is not False
        )

    @property
    def linear_ok(self) -> bool:
        """Only the conditions encoded by the involution and braid rows."""
        return all(self.involution) and all(self.braid)


def lifted_generators(ext: ExtensionData, a: Sequence[ResidueVector]) -> list[Permutation]:
    """Permutations ``g_s a_s`` in the attached realization."""
    real = ext.realization
    if real is None:
        raise ValueError("extension has no permutation realization")
    return [g * translation(x) for g, x in zip(real.generators, a)]


def verify_section(ext: ExtensionData, a: Sequence[ResidueVector]) -> SectionCheck:
    """Check that ``s -> g_s a_s`` satisfies the Coxeter presentation of ``S_n``."""
    mod = ext.module
    n = mod.n
    a = tuple(a)
    if len(a) != n - 1:
        raise ValueError(f"expected {n - 1} elements, got {len(a)}")
    for s, x in enumerate(a, 1):
        if x.modulus != mod.q or len(x) != mod.rank or not mod.contains(x):
            raise ValueError(f"a_{s} is not an element of the submodule")
    iota = mod.iota
    involution = tuple(
        (ext.f[s - 1] + iota(s) @ a[s - 1] + a[s - 1]).is_zero() for s in range(1, n)
    )
    braid = []
    for r in range(1, n - 1):
        ar, ar1 = a[r - 1], a[r]
        lhs = iota(r) @ (iota(r + 1) @ ar) + iota(r) @ ar1 + ar
        rhs = iota(r + 1) @ (iota(r) @ ar1) + iota(r + 1) @ ar + ar1
        braid.append(lhs == rhs)
    far = []
    for s, t in _far_pairs(n):
        far.append(iota(t) @ a[s - 1] + a[t - 1] == iota(s) @ a[t - 1] + a[s - 1])
    realized = None
    if ext.realization is not None:
        rho = lifted_generators(ext, a)
        realized = all((r * r).is_identity() for r in rho) and check_braid_relations(rho)
    return SectionCheck(tuple(involution), tuple(braid), tuple(far), realized)


@dataclass(frozen=True)
class Split:
    a: tuple[ResidueVector, ...]
    section_check: SectionCheck
    system: SplitSystem
    coefficients: ResidueVector
    # set when the plain system's canonical solution broke far commutation
    far_commutation_finding: Optional[str] = None

    splits = True


@dataclass(frozen=True)
class NonSplit:
    certificate: ResidueVector
    system: SplitSystem
    far_commutation_finding: Optional[str] = None

    splits = False

    def verify(self) -> bool:
        return verify_outcome(self.system.M, self.system.b, Insolvable(self.certificate))


SplitVerdict = Union[Split, NonSplit]


def decide_split(ext: ExtensionData) -> SplitVerdict:
    """Decide splitting by solving the linear system, returning a checked section or a certificate.

    If the canonical solution of the involution/braid system fails far
    commutation, the system is re-solved with the far-commutation rows
    appended and the event is recorded in ``far_commutation_finding``.
    """
    system = assemble_split_system(ext)
    out = solve_mod(system.M, system.b)
    if isinstance(out, Insolvable):
        return NonSplit(out.certificate, system)
    a = system.section(out.particular, ext.module)
    check = verify_section(ext, a)
    if check.ok:
        return Split(a, check, system, out.particular)
    if not check.linear_ok:
        raise SectionError("solution of the assembled system fails its own equations")

    finding = "canonical solution of the involution/braid system violates far commutation"
    augmented = assemble_split_system(ext, far_commutation=True)
    out = solve_mod(augmented.M, augmented.b)
    if isinstance(out, Insolvable):
        return NonSplit(
            out.certificate,
            augmented,
            finding + "; system with far-commutation rows is insolvable",
        )
    a = augmented.section(out.particular, ext.module)
    check = verify_section(ext, a)
    if not check.ok:
        raise SectionError("solution with far-commutation rows fails the section check")
    return Split(a, check, augmented, out.particular, finding + "; repaired by far-commutation rows")


def section_coefficients(ext: ExtensionData, a: Sequence[ResidueVector]) -> ResidueVector:
    """Stack generator coefficients of each ``a_s``; raises if some ``a_s`` is outside ``A``."""
    gens = ext.module.submodule_gens
    coords: list[int] = []
    for s, x in enumerate(a, 1):
        out = solve_mod(gens.transpose(), x)
        if not isinstance(out, Solution):
            raise ValueError(f"a_{s} is not an element of the submodule")
        coords.extend(out.particular.coords)
    return ResidueVector(tuple(coords), ext.q)


def solves_system(ext: ExtensionData, a: Sequence[ResidueVector], far_commutation: bool = False) -> bool:
    """Whether ``a`` satisfies the assembled matrix equation ``M x = b``."""
    system = assemble_split_system(ext, far_commutation)
    return system.M @ section_coefficients(ext, a) == system.b
