"""
PBW straightening in U(q(N)), the Kazhdan filtration, the module
Q = U(g)/I and its ad m'-invariants W.

Monomials are sorted tuples of generator indices (odd generators appear at
most once).  Generators are ordered complement-of-m first, m last, so a
monomial factors as (complement part)(m part) and reduction modulo the left
ideal I only has to replace the trailing m generators by their chi values.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .exactla import SparseMat, Subspace, _kernel_rows, inverse, matrix_from_columns
from .qsuper import QElement, bracket
from .structure import IsotropicChoice, NilpotentDatum, centralizer


class KazhdanIncompatible(ValueError):
    """The sl(2) weights do not give a non-negative filtration for this grading."""


class MismatchAtDegree(AssertionError):
    def __init__(self, d, lhs, rhs, what="dim F_d W vs C[S]"):
        super().__init__(f"{what}: mismatch at degree {d}: {lhs} != {rhs}")
        self.degree, self.lhs, self.rhs = d, lhs, rhs


class ZeroElement(ValueError):
    pass


# ---------------------------------------------------------------- ordered basis


@dataclass
class OrderedBasis:
    n: int
    gens: list  # QElement per generator
    parity: list  # 0/1
    gamma: list  # grading degree
    weight: list  # Kazhdan weight (generator Kazhdan degree is weight + 2)
    n_complement: int
    chi_values: list  # chi(g_a), used for m generators
    kazhdan: str  # "sl2" or "grading"
    _to_gen: SparseMat = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return len(self.gens)

    def kdeg(self, a: int) -> int:
        return self.weight[a] + 2

    def coords(self, x: QElement) -> dict:
        """Coordinates of an element of q(N) in the generator basis."""
        return self._to_gen.apply(x.coords)

    def in_m(self, a: int) -> bool:
        return a >= self.n_complement


def _weights(datum: NilpotentDatum, vectors: list[QElement], kazhdan: str):
    if kazhdan == "grading":
        return [datum.grading.degree_of(v) for v in vectors]
    out = []
    for v in vectors:
        w = datum.h_weight(v)
        if w is None or w.denominator != 1:
            raise KazhdanIncompatible("generator is not an integral ad h eigenvector")
        out.append(int(w))
    return out


def sl2_compatible(datum: NilpotentDatum, choice: IsotropicChoice) -> bool:
    """True when the ad h weights give a filtration with the needed positivity."""
    try:
        ob = build_ordered_basis(datum, choice, kazhdan="sl2")
        mp = [QElement(datum.n, v) for v in choice.m_prime.vectors()]
        wmp = _weights(datum, mp, "sl2")
    except KazhdanIncompatible:
        return False
    comp_ok = all(ob.weight[a] >= -1 for a in range(ob.n_complement))
    return comp_ok and all(w <= -1 for w in wmp)


def resolve_kazhdan(datum, choice, kazhdan: str) -> str:
    if kazhdan == "auto":
        return "sl2" if sl2_compatible(datum, choice) else "grading"
    if kazhdan not in ("sl2", "grading"):
        raise ValueError(f"unknown Kazhdan convention {kazhdan!r}")
    return kazhdan


def build_ordered_basis(datum: NilpotentDatum, choice: IsotropicChoice, kazhdan="auto", order="standard") -> OrderedBasis:
    kazhdan = resolve_kazhdan(datum, choice, kazhdan) if kazhdan == "auto" else kazhdan
    n = datum.n
    nn = n * n
    d = 2 * nn
    G = datum.grading
    lvecs = choice.l.vectors()
    lpiv = {min(v) for v in lvecs}
    comp = [k for k in range(d) if G.degrees[k] >= 0 or (G.degrees[k] == -1 and k not in lpiv)]
    low = [k for k in range(d) if G.degrees[k] <= -2]

    def key(item):
        gam, par, idx = item[1], item[2], item[3]
        if order == "standard":
            return (gam, par, idx)
        if order == "alternate":
            return (-gam, -par, -idx)
        raise ValueError(f"unknown order {order!r}")

    comp_items = [(QElement.basis(n, k), G.degrees[k], int(k >= nn), k) for k in comp]
    m_items = [(QElement(n, v), G.degrees[min(v)], int(min(v) >= nn), min(v)) for v in lvecs]
    m_items += [(QElement.basis(n, k), G.degrees[k], int(k >= nn), k) for k in low]
    comp_items.sort(key=key)
    m_items.sort(key=key)
    items = comp_items + m_items
    gens = [it[0] for it in items]
    weights = _weights(datum, gens, kazhdan)
    B = matrix_from_columns([g.coords for g in gens], d)
    return OrderedBasis(
        n=n,
        gens=gens,
        parity=[it[2] for it in items],
        gamma=[it[1] for it in items],
        weight=weights,
        n_complement=len(comp_items),
        chi_values=[datum.chi(g) for g in gens],
        kazhdan=kazhdan,
        _to_gen=inverse(B),
    )


# ---------------------------------------------------------------- U(g)


def _acc(out: dict, u: dict, c) -> None:
    if c == 0:
        return
    for m, v in u.items():
        t = out.get(m, 0) + c * v
        if t:
            out[m] = t
        else:
            out.pop(m, None)


class Enveloping:
    """U(g) in the PBW basis of an :class:`OrderedBasis`."""

    def __init__(self, basis: OrderedBasis):
        self.B = basis
        self._br: dict = {}
        self._memo: dict = {}

    def bracket_gens(self, a: int, b: int) -> dict:
        key = (a, b)
        r = self._br.get(key)
        if r is None:
            r = self.B.coords(bracket(self.B.gens[a], self.B.gens[b]))
            self._br[key] = r
        return r

    def gen(self, a: int) -> dict:
        return {(a,): Fraction(1)}

    def from_element(self, x: QElement) -> dict:
        return {(a,): c for a, c in self.B.coords(x).items()}

    def lmul_gen(self, a: int, mono: tuple) -> dict:
        """``g_a * mono`` in PBW form; the returned dict must not be mutated."""
        key = (a, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        par = self.B.parity
        if not mono or a < mono[0] or (a == mono[0] and par[a] == 0):
            res = {(a,) + mono: Fraction(1)}
        elif a == mono[0]:
            # odd generator squared: g_a g_a = 1/2 [g_a, g_a]
            res = {}
            rest = mono[1:]
            for k, c in self.bracket_gens(a, a).items():
                _acc(res, self.lmul_gen(k, rest), c / 2)
        else:
            i = mono[0]
            rest = mono[1:]
            sign = -1 if (par[a] and par[i]) else 1
            res = {}
            for m2, c in self.lmul_gen(a, rest).items():
                _acc(res, self.lmul_gen(i, m2), sign * c)
            for k, c in self.bracket_gens(a, i).items():
                _acc(res, self.lmul_gen(k, rest), c)
        self._memo[key] = res
        return res

    def lmul(self, a: int, u: dict) -> dict:
        out: dict = {}
        for m, c in u.items():
            _acc(out, self.lmul_gen(a, m), c)
        return out

    def mul(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for m, c in u.items():
            r = v
            for a in reversed(m):
                r = self.lmul(a, r)
            _acc(out, r, c)
        return out

    def mono_parity(self, mono: tuple) -> int:
        return sum(self.B.parity[a] for a in mono) % 2

    def mono_kdeg(self, mono: tuple) -> int:
        return sum(self.B.weight[a] + 2 for a in mono)

    def kazhdan_degree(self, u: dict) -> int:
        if not u:
            raise ZeroElement("the zero element has no Kazhdan degree")
        return max(self.mono_kdeg(m) for m in u)

    def supercommutator(self, u: dict, v: dict) -> dict:
        """``uv - (-1)^{|u||v|} vu`` extended bilinearly over homogeneous monomials."""
        out = self.mul(u, v)
        for mu, cu in u.items():
            pu = self.mono_parity(mu)
            for mv, cv in v.items():
                sign = -1 if (pu and self.mono_parity(mv)) else 1
                _acc(out, self.mul({mv: cv}, {mu: cu}), -sign)
        return out

    def symbol(self, u: dict) -> dict:
        """Top Kazhdan-degree part of ``u``."""
        d = self.kazhdan_degree(u)
        return {m: c for m, c in u.items() if self.mono_kdeg(m) == d}


def kazhdan_degree(alg: Enveloping, u: dict) -> int:
    return alg.kazhdan_degree(u)


def multiply(alg: Enveloping, a: dict, b: dict) -> dict:
    return alg.mul(a, b)


# ---------------------------------------------------------------- Q = U(g)/I


class GelfandGraev:
    """The module Q = U(g)/I with I generated by ``a - chi(a)``, ``a`` in m."""

    def __init__(self, datum: NilpotentDatum, choice: IsotropicChoice, kazhdan="auto", order="standard"):
        self.datum = datum
        self.choice = choice
        self.kazhdan = resolve_kazhdan(datum, choice, kazhdan)
        self.B = build_ordered_basis(datum, choice, self.kazhdan, order)
        self.U = Enveloping(self.B)
        self._ad_memo: dict = {}
        self.m_prime = [QElement(datum.n, v) for v in choice.m_prime.vectors()]
        self.m_prime_u = [self.U.from_element(b) for b in self.m_prime]
        self.m_prime_weight = _weights(datum, self.m_prime, self.kazhdan) if self.m_prime else []
        if any(w is None for w in self.m_prime_weight):
            raise KazhdanIncompatible("m' basis is not homogeneous")

    def reduce(self, u: dict) -> dict:
        """Canonical representative of ``u + I`` supported on complement generators."""
        nc = self.B.n_complement
        chi = self.B.chi_values
        out: dict = {}
        for m, c in u.items():
            cut = len(m)
            while cut > 0 and m[cut - 1] >= nc:
                cut -= 1
            coef = c
            for a in m[cut:]:
                coef *= chi[a]
                if coef == 0:
                    break
            if coef:
                _acc(out, {m[:cut]: Fraction(1)}, coef)
        return out

    def ad_monomial(self, b_index: int, mono: tuple) -> dict:
        """``ad b (mono)`` reduced, for the ``b_index``-th basis vector of m'."""
        key = (b_index, mono)
        hit = self._ad_memo.get(key)
        if hit is None:
            hit = self.reduce(self.U.supercommutator(self.m_prime_u[b_index], {mono: Fraction(1)}))
            self._ad_memo[key] = hit
        return hit

    def ad_action(self, a: QElement, q: dict) -> dict:
        au = self.U.from_element(a)
        return self.reduce(self.U.supercommutator(au, q))

    def complement_monomials(self, kmax: int) -> list[tuple]:
        """Monomials in complement generators with Kazhdan degree <= kmax."""
        nc = self.B.n_complement
        kd = [self.B.kdeg(a) for a in range(nc)]
        if any(x <= 0 for x in kd):
            raise KazhdanIncompatible("complement generator of non-positive Kazhdan degree")
        par = self.B.parity
        out = []

        def rec(start, mono, deg):
            out.append(tuple(mono))
            for a in range(start, nc):
                nd = deg + kd[a]
                if nd > kmax:
                    continue
                mono.append(a)
                rec(a + 1 if par[a] else a, mono, nd)
                mono.pop()

        rec(0, [], 0)
        return out

    def filtration_basis(self, kmax: int) -> list[tuple]:
        """F_kmax Q basis ordered by Kazhdan degree descending, then monomial."""
        mons = self.complement_monomials(kmax)
        return sorted(mons, key=lambda m: (-self.U.mono_kdeg(m), m))

    def graded_dims(self, kmax: int) -> list[int]:
        dims = [0] * (kmax + 1)
        for m in self.complement_monomials(kmax):
            dims[self.U.mono_kdeg(m)] += 1
        return dims


def reduce_mod_I(Q: GelfandGraev, u: dict) -> dict:
    return Q.reduce(u)


def ad_action(Q: GelfandGraev, a: QElement, q: dict) -> dict:
    return Q.ad_action(a, q)


# ---------------------------------------------------------------- W


@dataclass
class WBasis:
    kmax: int
    by_degree: dict  # d -> list of UElement (dicts)
    dims: list  # cumulative dim F_d W

    def elements(self):
        for d in sorted(self.by_degree):
            yield from self.by_degree[d]


def whittaker_invariants(Q: GelfandGraev, kmax: int) -> WBasis:
    cols = Q.filtration_basis(kmax)
    rows: dict = {}
    for bi in range(len(Q.m_prime)):
        for c, mono in enumerate(cols):
            for m2, v in Q.ad_monomial(bi, mono).items():
                rows.setdefault((bi, m2), {})[c] = v
    kr = _kernel_rows(list(rows.values()), len(cols))
    ker = Subspace.span(kr, len(cols))
    by_degree: dict = {d: [] for d in range(kmax + 1)}
    for v in ker.vectors():
        top = Q.U.mono_kdeg(cols[min(v)])
        by_degree[top].append({cols[i]: x for i, x in v.items()})
    dims = []
    tot = 0
    for d in range(kmax + 1):
        tot += len(by_degree[d])
        dims.append(tot)
    return WBasis(kmax, by_degree, dims)


def is_invariant(Q: GelfandGraev, q: dict) -> bool:
    return all(not Q.reduce(Q.U.supercommutator(b, q)) for b in Q.m_prime_u)


# ---------------------------------------------------------------- Hilbert series


def hilbert_series(generators, kmax: int) -> list[int]:
    """Graded dimensions of the free supercommutative algebra on ``(degree, parity)`` generators."""
    coeffs = [0] * (kmax + 1)
    coeffs[0] = 1
    for deg, par in generators:
        if deg <= 0:
            raise ValueError("generators must have positive degree")
        if par:
            # exterior: multiply by (1 + t^deg)
            for k in range(kmax, deg - 1, -1):
                coeffs[k] += coeffs[k - deg]
        else:
            # polynomial: multiply by 1/(1 - t^deg)
            for k in range(deg, kmax + 1):
                coeffs[k] += coeffs[k - deg]
    return coeffs


def slice_generators(datum: NilpotentDatum, kazhdan: str) -> list[tuple[int, int]]:
    """``(degree, parity)`` of the coordinate functions on the Slodowy slice.

    A basis vector of ``Pi g_F`` of weight ``j`` is paired by the odd form with a
    coordinate of weight ``-j``, so the coordinate has Kazhdan degree ``2 - j``
    and the parity of the corresponding vector of ``g_F``.
    """
    n = datum.n
    nn = n * n
    gF = centralizer(datum.F)
    out = []
    for v in gF.vectors():
        x = QElement(n, v)
        w = _weights(datum, [x], kazhdan)[0]
        if w is None:
            raise KazhdanIncompatible("g_F basis vector is not homogeneous")
        out.append((2 - w, int(min(v) < nn)))
    return sorted(out)


def slice_hilbert_series(datum: NilpotentDatum, kmax: int, kazhdan: str = "sl2") -> list[int]:
    return hilbert_series(slice_generators(datum, kazhdan), kmax)


def cumulative(xs):
    out, t = [], 0
    for x in xs:
        t += x
        out.append(t)
    return out


@dataclass
class NuReport:
    kmax: int
    kazhdan: str
    dims_W: list
    dims_CS_cumulative: list
    grQ_dims: list
    grQ_expected: list
    nu_verified: bool
    grQ_verified: bool
    wall_time_ms: int

    @property
    def ok(self) -> bool:
        return self.nu_verified and self.grQ_verified


def verify_nu(datum: NilpotentDatum, choice: IsotropicChoice, kmax: int, kazhdan="auto", order="standard", strict=False) -> NuReport:
    t0 = time.perf_counter()
    Q = GelfandGraev(datum, choice, kazhdan, order)
    W = whittaker_invariants(Q, kmax)
    cs = cumulative(slice_hilbert_series(datum, kmax, Q.kazhdan))
    grq = Q.graded_dims(kmax)
    nc = Q.B.n_complement
    grq_exp = hilbert_series([(Q.B.kdeg(a), Q.B.parity[a]) for a in range(nc)], kmax)
    if strict:
        for d in range(kmax + 1):
            if W.dims[d] != cs[d]:
                raise MismatchAtDegree(d, W.dims[d], cs[d])
    ms = int((time.perf_counter() - t0) * 1000)
    return NuReport(kmax, Q.kazhdan, W.dims, cs, grq, grq_exp, W.dims == cs, grq == grq_exp, ms)
