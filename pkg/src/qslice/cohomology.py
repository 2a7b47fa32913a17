"""
Chevalley-Eilenberg cohomology of a graded Lie superalgebra with coefficients
in a graded module, and its instance m' acting on gr Q.

Cochains are polynomials in ghosts ``theta^a`` (dual to a basis ``b_a``) with
coefficients in the module.  A ghost has parity ``|b_a| + 1``: duals of even
vectors anticommute, duals of odd vectors commute and may repeat.  With this
convention the differential is

    d(w (x) q) = Q(w) (x) q + sum_a (-1)^{|a||w|} theta^a w (x) rho(b_a) q,
    Q(theta^c) = -1/2 sum_{a,b} (-1)^{|a|(|b|+1)} f^c_{ab} theta^a theta^b.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactla import SparseMat, rank
from .envelope import GelfandGraev, slice_hilbert_series
from .qsuper import QElement, bracket


class WeightError(ValueError):
    """Ghost weights must be positive for the cochain spaces to be finite."""


# ---------------------------------------------------------------- ghost algebra


def normal_order(word, gpar) -> tuple[int, tuple] | None:
    """Sort a word of ghosts with Koszul signs; None when it vanishes."""
    w = list(word)
    sign = 1
    # insertion sort, tracking the sign of each adjacent swap
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            if gpar[w[j - 1]] and gpar[w[j]]:
                sign = -sign
            w[j - 1], w[j] = w[j], w[j - 1]
            j -= 1
    for a, b in zip(w, w[1:]):
        if a == b and gpar[a]:
            return None
    return sign, tuple(w)


@dataclass
class GradedLie:
    """A finite-dimensional Lie superalgebra with a basis graded by positive ghost weights.

    ``struct[a, b]`` is ``{c: f^c_ab}`` for ``[b_a, b_b] = sum_c f^c_ab b_c``.
    """

    parity: list
    ghost_weight: list
    struct: dict

    @property
    def dim(self) -> int:
        return len(self.parity)

    def __post_init__(self):
        if any(w < 1 for w in self.ghost_weight):
            raise WeightError("every ghost needs weight >= 1")
        self.gpar = [(p + 1) % 2 for p in self.parity]
        self._qmemo: dict = {}

    def ghost_parity(self, mono: tuple) -> int:
        return sum(self.gpar[a] for a in mono) % 2

    def ghost_weight_of(self, mono: tuple) -> int:
        return sum(self.ghost_weight[a] for a in mono)

    def ghost_monomials(self, k: int, max_weight: int) -> list[tuple]:
        out = []

        def rec(start, mono, wt):
            if len(mono) == k:
                out.append(tuple(mono))
                return
            for a in range(start, self.dim):
                nw = wt + self.ghost_weight[a]
                if nw > max_weight:
                    continue
                mono.append(a)
                rec(a + 1 if self.gpar[a] else a, mono, nw)
                mono.pop()

        rec(0, [], 0)
        return out

    def q_ghost(self, c: int) -> dict:
        """``Q(theta^c)`` as ``{sorted mono: coef}``."""
        out: dict = {}
        for (a, b), fc in self.struct.items():
            f = fc.get(c)
            if not f:
                continue
            sign = -1 if (self.parity[a] and (self.parity[b] + 1) % 2) else 1
            r = normal_order((a, b), self.gpar)
            if r is None:
                continue
            s2, m = r
            v = out.get(m, 0) + Fraction(-1, 2) * sign * s2 * f
            if v:
                out[m] = v
            else:
                out.pop(m)
        return out

    def q_mono(self, mono: tuple) -> dict:
        hit = self._qmemo.get(mono)
        if hit is not None:
            return hit
        out: dict = {}
        pre = 0
        for i, c in enumerate(mono):
            sign = -1 if pre else 1
            for m, v in self.q_ghost(c).items():
                r = normal_order(mono[:i] + m + mono[i + 1:], self.gpar)
                if r is None:
                    continue
                s2, mm = r
                t = out.get(mm, 0) + sign * s2 * v
                if t:
                    out[mm] = t
                else:
                    out.pop(mm)
            pre ^= self.gpar[c]
        self._qmemo[mono] = out
        return out


@dataclass
class GradedModule:
    """Graded module given by a degree per basis vector and ``act(a, i) -> {j: coef}``."""

    degree: list
    act: object

    def basis_of_degree(self, d: int) -> list[int]:
        return [i for i, x in enumerate(self.degree) if x == d]


class CEComplex:
    """Weight-graded Chevalley-Eilenberg complex ``C^k(d)``."""

    def __init__(self, lie: GradedLie, module: GradedModule):
        self.lie = lie
        self.mod = module
        self._spaces: dict = {}

    def space(self, k: int, d: int) -> list[tuple]:
        """Basis of C^k(d): pairs ``(ghost mono, module index)``."""
        key = (k, d)
        hit = self._spaces.get(key)
        if hit is None:
            hit = []
            if k >= 0:
                for g in self.lie.ghost_monomials(k, d):
                    rest = d - self.lie.ghost_weight_of(g)
                    for i in self.mod.basis_of_degree(rest):
                        hit.append((g, i))
            self._spaces[key] = hit
        return hit

    def apply(self, g: tuple, i: int) -> dict:
        lie = self.lie
        out: dict = {}

        def add(key, v):
            t = out.get(key, 0) + v
            if t:
                out[key] = t
            else:
                out.pop(key)

        for m, v in lie.q_mono(g).items():
            add((m, i), v)
        pw = lie.ghost_parity(g)
        for a in range(lie.dim):
            acted = self.mod.act(a, i)
            if not acted:
                continue
            r = normal_order((a,) + g, lie.gpar)
            if r is None:
                continue
            s2, m = r
            sign = -s2 if (lie.parity[a] and pw) else s2
            for j, c in acted.items():
                add((m, j), sign * c)
        return out

    def differential(self, k: int, d: int) -> SparseMat:
        src = self.space(k, d)
        dst = self.space(k + 1, d)
        pos = {x: r for r, x in enumerate(dst)}
        ent = {}
        for c, (g, i) in enumerate(src):
            for key, v in self.apply(g, i).items():
                ent[pos[key], c] = v
        return SparseMat(len(dst), len(src), ent)

    def max_degree(self, d: int) -> int:
        """Cochains of weight d vanish above this cohomological degree."""
        return d // min(self.lie.ghost_weight) if self.lie.dim else 0

    def cohomology(self, kmax_weight: int, imax: int, full: bool = False) -> "CohomologyTable":
        table = {}
        cdims = {}
        d2_ok = True
        for d in range(kmax_weight + 1):
            top = self.max_degree(d) if full else imax
            ranks = {-1: 0}
            prev = None
            for k in range(top + 1):
                D = self.differential(k, d)
                ranks[k] = rank(D)
                if prev is not None and (D @ prev).nnz:
                    d2_ok = False
                prev = D
                cdims[k, d] = len(self.space(k, d))
                table[k, d] = cdims[k, d] - ranks[k] - ranks[k - 1]
        return CohomologyTable(table, cdims, d2_ok, full)


@dataclass
class CohomologyTable:
    dims: dict  # (i, d) -> dim H^i(d)
    cochain_dims: dict
    d_squared_zero: bool
    full: bool

    def euler_ok(self) -> bool | None:
        """Cochain and cohomology Euler characteristics agree in every weight (full tables only)."""
        if not self.full:
            return None
        ds = {d for _, d in self.dims}
        for d in ds:
            lhs = sum((-1) ** k * c for (k, dd), c in self.cochain_dims.items() if dd == d)
            rhs = sum((-1) ** k * h for (k, dd), h in self.dims.items() if dd == d)
            if lhs != rhs:
                return False
        return True

    def h(self, i: int, d: int) -> int:
        return self.dims[i, d]


# ---------------------------------------------------------------- m' on gr Q


def mprime_lie(Q: GelfandGraev) -> GradedLie:
    """m' with its rref basis, parities and ghost weights ``-weight(b)``."""
    basis = Q.m_prime
    n = Q.datum.n
    nn = n * n
    piv = [min(b.coords) for b in basis]
    struct = {}
    for a, x in enumerate(basis):
        for b, y in enumerate(basis):
            z = bracket(x, y)
            coef = {c: z.coords[p] for c, p in enumerate(piv) if z.coords.get(p)}
            # coordinates in an rref basis are read off at the pivots
            recon: dict = {}
            for c, v in coef.items():
                for k, u in basis[c].coords.items():
                    recon[k] = recon.get(k, 0) + v * u
            if {k: v for k, v in recon.items() if v} != z.coords:
                raise ArithmeticError("m' is not closed under the bracket")
            if coef:
                struct[a, b] = coef
    parity = [int(p >= nn) for p in piv]
    return GradedLie(parity, [-w for w in Q.m_prime_weight], struct)


def gr_module(Q: GelfandGraev, kmax: int) -> tuple[GradedModule, list[tuple]]:
    """gr^K Q truncated at Kazhdan degree kmax, with the top-symbol action of m'."""
    mons = Q.complement_monomials(kmax)
    pos = {m: i for i, m in enumerate(mons)}
    deg = [Q.U.mono_kdeg(m) for m in mons]
    w = Q.m_prime_weight
    memo: dict = {}

    def act(a, i):
        key = (a, i)
        hit = memo.get(key)
        if hit is None:
            target = deg[i] + w[a]
            hit = {}
            for m, v in Q.ad_monomial(a, mons[i]).items():
                dm = Q.U.mono_kdeg(m)
                if dm > target:
                    raise ArithmeticError("ad m' raised the Kazhdan degree")
                if dm == target:
                    hit[pos[m]] = v
            memo[key] = hit
        return hit

    return GradedModule(deg, act), mons


@dataclass
class CohomologyReport:
    kmax: int
    imax: int
    kazhdan: str
    table: dict
    d_squared_zero: bool
    vanishing_ok: bool
    h0: list
    slice_series: list
    h0_matches_slice: bool
    euler_ok: bool | None

    @property
    def ok(self) -> bool:
        return self.d_squared_zero and self.vanishing_ok and self.h0_matches_slice and self.euler_ok is not False


def differential(k: int, d: int, datum, choice, kazhdan="auto") -> SparseMat:
    Q = GelfandGraev(datum, choice, kazhdan)
    mod, _ = gr_module(Q, d)
    return CEComplex(mprime_lie(Q), mod).differential(k, d)


def cohomology_dims(datum, choice, kmax: int, imax: int, kazhdan="auto", full=False) -> CohomologyReport:
    Q = GelfandGraev(datum, choice, kazhdan)
    if not Q.m_prime:
        lie = GradedLie([], [], {})
    else:
        lie = mprime_lie(Q)
    mod, _ = gr_module(Q, kmax)
    tab = CEComplex(lie, mod).cohomology(kmax, imax, full)
    h0 = [tab.h(0, d) for d in range(kmax + 1)]
    cs = slice_hilbert_series(datum, kmax, Q.kazhdan)
    vanish = all(v == 0 for (i, d), v in tab.dims.items() if 1 <= i <= imax)
    return CohomologyReport(kmax, imax, Q.kazhdan, tab.dims, tab.d_squared_zero, vanish, h0, cs, h0 == cs, tab.euler_ok())


def trivial_module() -> GradedModule:
    return GradedModule([0], lambda a, i: {})


def lie_from_elements(basis: list[QElement], weights: list[int]) -> GradedLie:
    """Helper for small examples: a subalgebra of q(N) spanned by canonical units."""
    n = basis[0].n
    nn = n * n
    idx = {min(b.coords): c for c, b in enumerate(basis)}
    struct = {}
    for a, x in enumerate(basis):
        for b, y in enumerate(basis):
            z = bracket(x, y)
            coef = {idx[k]: v for k, v in z.coords.items()}
            if coef:
                struct[a, b] = coef
    return GradedLie([int(min(b.coords) >= nn) for b in basis], weights, struct)
