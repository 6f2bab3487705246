"""The wreath-type braid-like permutation groups and their kernel modules.

``B_n(q)`` acts on ``q * n`` points ``(x, t)``.  The generator ``g_s`` moves
strand ``s`` onto strand ``s + 1`` and strand ``s + 1`` back onto strand ``s``
with a twist of ``+1``::

    (x, s) -> (x, s + 1)        (x, s + 1) -> (x + 1, s)

(strands 1-based in the formulas, 0-based in point labels).  Then ``g_s^2``
is the translation by ``f_s = e_s + e_{s+1}``, conjugation by ``g_s`` swaps
coordinates ``s`` and ``s + 1``, and for ``n >= 3`` the kernel of the block
projection is the set of vectors with even coordinate sum.  That kernel is
generated by ``f_1 .. f_{n-1}`` and ``h_n = 2 e_n``.

This concrete family is chosen to agree with every identity used in the
splitting analysis; it is not claimed to be the only such family.
"""

from __future__ import annotations

from dataclasses import dataclass

from .crt import crt_combine
from .extension import ExtensionData, Realization, SigmaModule, operator_J
from .linalg import ResidueMatrix, ResidueVector, SolveOutcome, solve_mod
from .permgroup import (
    DEFAULT_GROUP_CAP,
    BlockMap,
    Permutation,
    StructureError,
    conjugation_action,
    decode_translation,
    generate,
    kernel,
    translation,
)


@dataclass(frozen=True)
class WreathInstanceSpec:
    n: int
    q: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")

    @property
    def q2(self) -> int | None:
        """Half of q for even q; undefined (None) for odd q."""
        return self.q // 2 if self.q % 2 == 0 else None

    @property
    def degree(self) -> int:
        return self.q * self.n


def build_wreath_group(spec: WreathInstanceSpec, cap: int = DEFAULT_GROUP_CAP) -> list[Permutation]:
    n, q = spec.n, spec.q
    if spec.degree > cap:
        raise ValueError(f"degree {spec.degree} exceeds cap {cap}")
    gens = []
    for s in range(n - 1):
        img = list(range(q * n))
        for x in range(q):
            img[s * q + x] = (s + 1) * q + x
            img[(s + 1) * q + x] = s * q + (x + 1) % q
        gens.append(Permutation(tuple(img)))
    return gens


def _vec(n: int, q: int, entries: dict[int, int]) -> ResidueVector:
    """Vector from 1-based coordinate -> value."""
    return ResidueVector(tuple(entries.get(i, 0) for i in range(1, n + 1)), q)


def f_bar(n: int, q: int, s: int) -> ResidueVector:
    if not 1 <= s <= n:
        raise IndexError(s)
    if s == n:
        return _vec(n, q, {n: 1})
    return _vec(n, q, {s: 1, s + 1: 1})


def g_bar(n: int, q: int, r: int) -> ResidueVector:
    if not 1 <= r <= n - 2:
        raise IndexError(r)
    return _vec(n, q, {r: 1, r + 2: 1})


def h_bar(n: int, q: int, j: int) -> ResidueVector:
    if not 1 <= j <= n:
        raise IndexError(j)
    return _vec(n, q, {j: 2})


def coordinate_swap(n: int, q: int, s: int) -> ResidueMatrix:
    """Matrix exchanging coordinates ``s`` and ``s + 1`` (1-based)."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    rows[s - 1], rows[s] = rows[s], rows[s - 1]
    return ResidueMatrix(tuple(map(tuple, rows)), q)


def an_sigma_module(n: int, q: int) -> SigmaModule:
    """Closed-form kernel module: coordinate swaps acting on the span of ``f_1..f_{n-1}, h_n``."""
    WreathInstanceSpec(n, q)
    gens = [f_bar(n, q, s) for s in range(1, n)] + [h_bar(n, q, n)]
    return SigmaModule(
        n=n,
        q=q,
        rank=n,
        action=tuple(coordinate_swap(n, q, s) for s in range(1, n)),
        submodule_gens=ResidueMatrix.from_rows(gens, q),
    )


def wreath_extension(n: int, q: int) -> ExtensionData:
    """Extension data from the closed form, with the permutation generators attached."""
    spec = WreathInstanceSpec(n, q)
    return ExtensionData(
        an_sigma_module(n, q),
        tuple(f_bar(n, q, s) for s in range(1, n)),
        Realization(tuple(build_wreath_group(spec)), BlockMap.wreath(n, q), q),
    )


def _span(vectors, q: int, rank: int) -> set:
    span = {ResidueVector.zeros(rank, q)}
    for v in vectors:
        if v in span:
            continue
        frontier = set(span)
        while frontier:
            new = {w + v for w in frontier} - span
            span |= new
            frontier = new
    return span


def same_module(a: SigmaModule, b: SigmaModule) -> bool:
    """Identical action matrices and identical submodules (compared as sets)."""
    if (a.n, a.q, a.rank) != (b.n, b.q, b.rank) or a.action != b.action:
        return False
    return _span(a.submodule_gens.row_vectors(), a.q, a.rank) == _span(
        b.submodule_gens.row_vectors(), b.q, b.rank
    )


def extract_extension(spec: WreathInstanceSpec, cap: int = DEFAULT_GROUP_CAP) -> ExtensionData:
    """Recover the extension data from the permutation group itself.

    The kernel is found by enumeration, the action by conjugating unit
    translations, and ``f_s`` by decoding ``g_s^2``.  For ``n >= 3`` the
    result is checked against :func:`an_sigma_module`; for ``n = 2`` the
    group is cyclic and its kernel is only the multiples of ``f_1``.
    """
    n, q = spec.n, spec.q
    gens = build_wreath_group(spec, cap)
    blocks = BlockMap.wreath(n, q)
    G = generate(gens, cap)
    ker = [decode_translation(k, blocks, q).vector for k in kernel(G, blocks)]

    basis: list[ResidueVector] = []
    span = {ResidueVector.zeros(n, q)}
    for v in sorted(ker, key=lambda v: v.coords):
        if v not in span:
            basis.append(v)
            span = _span(basis, q, n)
    if len(span) != len(ker) or set(ker) != span:
        raise StructureError("kernel translations do not form a subgroup")
    if not basis:
        basis = [ResidueVector.zeros(n, q)]

    action = []
    for g in gens:
        cols = [
            conjugation_action(g, translation(ResidueVector.unit(n, j, q)), blocks, q).vector.coords
            for j in range(n)
        ]
        action.append(ResidueMatrix(tuple(zip(*cols)), q))
    f = tuple(decode_translation(g * g, blocks, q).vector for g in gens)

    module = SigmaModule(n, q, n, tuple(action), ResidueMatrix.from_rows(basis, q))
    ext = ExtensionData(module, f, Realization(tuple(gens), blocks, q))
    if n >= 3:
        closed = an_sigma_module(n, q)
        if not same_module(module, closed):
            raise StructureError(f"extracted module disagrees with the closed form for n={n}, q={q}")
        if f != tuple(f_bar(n, q, s) for s in range(1, n)):
            raise StructureError(f"extracted f vectors disagree with the closed form for n={n}, q={q}")
    return ext


def an_coordinates(v: ResidueVector, n: int) -> tuple[list[int], int]:
    """Coefficients of ``v`` against ``f_1..f_{n-1}, h_n``.

    The ``h_n`` coefficient is returned modulo the order of ``h_n``
    (``q/2`` for even ``q``, ``q`` otherwise).
    """
    q = v.modulus
    c = [v[0] % q]
    for t in range(1, n - 1):
        c.append((v[t] - c[-1]) % q)
    twice = (v[n - 1] - c[-1]) % q
    if q % 2 == 0:
        if twice % 2:
            raise ValueError(f"{v.coords} is not in the submodule")
        return c, (twice // 2) % (q // 2)
    return c, (twice * pow(2, -1, q)) % q if q > 1 else 0


def case1_solution(n: int, q: int) -> tuple[ResidueVector, ...]:
    """``a_s = -(1/2) f_s`` with 1/2 taken modulo odd ``q``."""
    if q % 2 == 0:
        raise ValueError(f"q must be odd, got {q}")
    half = pow(2, -1, q) if q > 1 else 0
    return tuple(f_bar(n, q, s) * (-half) for s in range(1, n))


def case2_mod2_solution(n: int) -> tuple[ResidueVector, ...]:
    """The explicit solution over Z/2: ``a_r = f_r + .. + f_{n-2}``, ``a_{n-2} = f_{n-1}``, ``a_{n-1} = f_{n-2}``."""
    if n < 3:
        raise ValueError("needs n >= 3")
    a = []
    for r in range(1, n - 2):
        v = ResidueVector.zeros(n, 2)
        for t in range(r, n - 1):
            v = v + f_bar(n, 2, t)
        a.append(v)
    a.append(f_bar(n, 2, n - 1))
    a.append(f_bar(n, 2, n - 2))
    return tuple(a)


def case2_solution(n: int, q: int) -> tuple[ResidueVector, ...]:
    """CRT of the odd-part solution modulo ``q/2`` and the explicit mod-2 solution."""
    if q % 4 != 2:
        raise ValueError(f"q must be 2 mod 4, got {q}")
    q2 = q // 2
    mod2 = case2_mod2_solution(n)
    if q2 == 1:
        return tuple(ResidueVector(v.coords, q) for v in mod2)
    odd = case1_solution(n, q2)
    return tuple(crt_combine([u, v]) for u, v in zip(mod2, odd))


@dataclass(frozen=True)
class Case3Congruences:
    """``2 x1 + x2 + 1 = 0`` and ``2 (-1)^(n-1) x2 + 4 y = 0`` modulo q, in unknowns (x1, x2, y)."""

    n: int
    q: int

    @property
    def matrix(self) -> ResidueMatrix:
        sign = -1 if (self.n - 1) % 2 else 1
        return ResidueMatrix(((2, 1, 0), (0, 2 * sign, 4)), self.q)

    @property
    def rhs(self) -> ResidueVector:
        return ResidueVector((-1, 0), self.q)

    def holds(self, x1: int, x2: int, y: int) -> bool:
        return self.matrix @ ResidueVector((x1, x2, y), self.q) == self.rhs


def case3_obstruction(n: int, q: int) -> SolveOutcome:
    if n < 3:
        raise ValueError("needs n >= 3")
    c = Case3Congruences(n, q)
    return solve_mod(c.matrix, c.rhs)


def j1_coefficients(n: int, q: int, x: list[int], y: int) -> tuple[list[int], int]:
    """Coefficients of ``J_1(a)`` for ``a = sum x_t f_t + y h_n``."""
    mod = an_sigma_module(n, q)
    a = h_bar(n, q, n) * y
    for t, xt in enumerate(x, 1):
        a = a + f_bar(n, q, t) * xt
    return an_coordinates(operator_J(mod, 1) @ a, n)
