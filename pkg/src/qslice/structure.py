"""
Structure theory around a nilpotent functional chi = (E, .) on q(N).

Everything is computed in the canonical coordinates of :mod:`qslice.qsuper`;
subspaces carry the parity split ``N*N`` so superdimensions can be read off.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactla import (
    Echelon,
    NoSolution,
    SparseMat,
    Subspace,
    axpy,
    inverse,
    kernel,
    matrix_from_columns,
    rank,
    solve,
    subspace_intersection,
    subspace_sum,
)
from .pyramid import Grading, grading_from_pyramid, nilpotent_from_pyramid, sudim_of_degree
from .qsuper import (
    LinearFunctional,
    QElement,
    ad_matrix,
    bracket,
    element_from_functional,
    functional_from_element,
    odd_form,
    pi,
)


class CenterNotDegreeZero(ValueError):
    pass


class TripleNotFound(RuntimeError):
    pass


class DegenerateForm(RuntimeError):
    pass


class IsotropicConstructionFailure(RuntimeError):
    pass


class DecompositionFailure(AssertionError):
    pass


def _dimq(n):
    return 2 * n * n


# ---------------------------------------------------------------- centralizers


def centralizer(x: QElement) -> Subspace:
    """``{y : [x, y] = 0}``."""
    n = x.n
    k = kernel(ad_matrix(x))
    return Subspace(k.ambient_dim, k.basis, n * n)


def centralizer_of_functional(chi: LinearFunctional) -> Subspace:
    """``{y : chi([y, g]) = 0}``, assembled as one row per basis element of g."""
    n = chi.n
    d = _dimq(n)
    ent = {}
    for c in range(d):
        y = QElement.basis(n, c)
        for r in range(d):
            v = chi(bracket(y, QElement.basis(n, r)))
            if v:
                ent[r, c] = v
    k = kernel(SparseMat(d, d, ent))
    return Subspace(d, k.basis, n * n)


def gl_commutant(e: QElement) -> Subspace:
    """Centralizer of ``e`` inside gl(N), in gl(N) coordinates (N*N)."""
    n = e.n
    a = e.s
    ent = {}
    for c in range(n * n):
        i, j = divmod(c, n)
        # [a, E_ij] = sum_k a_{ki} E_kj - sum_k a_{jk} E_ik
        for (p, q), v in a.items():
            if q == i:
                ent[p * n + j, c] = ent.get((p * n + j, c), 0) + v
            if p == j:
                ent[i * n + q, c] = ent.get((i * n + q, c), 0) - v
    return kernel(SparseMat(n * n, n * n, ent))


def anticommutant_basis(e: QElement, P) -> list[QElement]:
    """Basis ``z_{j,i;k}`` of the matrices anticommuting with ``e = e^P``.

    ``z_{j,i;k}`` sends ``v_{t_i}`` to ``e^k v_{t_j}``, kills ``v_{t_i'}`` for the
    other rows and is extended by ``z(e^s v) = (-1)^s e^s z(v)``; admissible ``k``
    satisfy ``p_j > k >= max(0, p_j - p_i)``.  Returned as even elements of q(N).
    """
    n = P.N
    parts = P.shape.parts
    rows = [P.row_labels(r) for r in range(len(parts))]
    out = []
    for j, pj in enumerate(parts):
        for i, pi_ in enumerate(parts):
            for k in range(max(0, pj - pi_), pj):
                s = {}
                # e^s v_{t_i} is the box s places left of the end of row i
                for step in range(pi_):
                    tgt = step + k
                    if tgt >= pj:
                        continue
                    src = rows[i][pi_ - 1 - step]
                    dst = rows[j][pj - 1 - tgt]
                    s[dst - 1, src - 1] = (-1) ** step
                out.append(QElement.from_blocks(n, s, None))
    return out


# ---------------------------------------------------------------- goodness


@dataclass
class GoodnessReport:
    gg1: bool
    gg2: bool
    gg1_prime: bool
    gg2_prime: bool
    gg3: bool
    gl_good: bool
    good: bool

    @property
    def consistent(self) -> bool:
        """The equivalences that must hold whatever the verdict."""
        return self.gg1 == self.gg1_prime and self.gg2 == self.gg2_prime and self.good == self.gl_good

    def to_json(self) -> dict:
        return {"gg1": self.gg1, "gg2": self.gg2, "gg3": self.gg3, "gl_equiv": self.good == self.gl_good}


def _inside(sub: Subspace, allowed: set) -> bool:
    return all(set(v) <= allowed for v in sub.vectors())


def check_good(G: Grading, chi: LinearFunctional) -> GoodnessReport:
    n = G.n
    d = _dimq(n)
    if G.degree_of(QElement.identity(n)) != 0:
        raise CenterNotDegreeZero("the identity must have degree 0")
    E = element_from_functional(chi)
    nonneg = set(G.indices_where(lambda j: j >= 0))

    gg1 = all(v == 0 or G.degrees[k] == -2 for k, v in chi.values.items())
    gg2 = _inside(centralizer_of_functional(chi), nonneg)
    gg1p = E.is_zero() or G.degree_of(E) == 2
    gg2p = _inside(centralizer(E), nonneg)

    gg3 = True
    for a in range(d):
        for b in range(d):
            if G.degrees[a] + G.degrees[b] != 0 and odd_form(QElement.basis(n, a), QElement.basis(n, b)) != 0:
                gg3 = False

    # goodness of the restriction to gl(N) for e = Pi(E)
    e = pi(E)
    e_ok = e.is_zero() or G.degree_of(e) == 2
    gl_nonneg = {k for k in range(n * n) if G.degrees[k] >= 0}
    gl_good = e_ok and _inside(gl_commutant(e), gl_nonneg)

    return GoodnessReport(gg1, gg2, gg1p, gg2p, gg3, gl_good, gg1 and gg2)


# ---------------------------------------------------------------- sl(2)


def jordan_chains(a: SparseMat) -> list[list[dict]]:
    """Jordan chains ``[v, a v, ..., a^{L-1} v]`` of a nilpotent matrix.

    Chain heads are taken from the rref bases of the kernels of powers of
    ``a``, longest chains first.
    """
    n = a.rows
    kers = [Subspace.zero(n)]
    p = SparseMat.identity(n)
    while kers[-1].dim < n:
        p = p @ a
        k = kernel(p)
        if k.dim == kers[-1].dim:
            raise ValueError("matrix is not nilpotent")
        kers.append(k)
    top = len(kers) - 1
    heads: list[tuple[dict, int]] = []

    def power_apply(v, s):
        for _ in range(s):
            v = a.apply(v)
        return v

    for k in range(top, 0, -1):
        ech = Echelon()
        for v in kers[k - 1].vectors():
            ech.add(v)
        for v, L in heads:
            ech.add(power_apply(v, L - k))
        for v in kers[k].vectors():
            if ech.add(v):
                heads.append((v, k))
    return [[power_apply(v, s) for s in range(L)] for v, L in heads]


def standard_triple(e: QElement) -> tuple[QElement, QElement]:
    """``(h, f)`` completing ``e`` to an sl(2)-triple via a Jordan basis."""
    n = e.n
    a = SparseMat(n, n, e.s)
    chains = jordan_chains(a)
    cols, hw, fmap = [], [], []
    for ch in chains:
        L = len(ch)
        base = len(cols)
        for s, u in enumerate(ch):
            cols.append(u)
            hw.append(-(L - 1) + 2 * s)
            fmap.append((base + s - 1, s * (L - s)) if s > 0 else None)
    T = matrix_from_columns(cols, n)
    Tinv = inverse(T)
    D = SparseMat(n, n, {(i, i): w for i, w in enumerate(hw)})
    F = SparseMat(n, n, {(t[0], i): t[1] for i, t in enumerate(fmap) if t is not None})
    h = T @ D @ Tinv
    f = T @ F @ Tinv
    return QElement.from_blocks(n, h.entries, None), QElement.from_blocks(n, f.entries, None)


def is_sl2_triple(e, h, f) -> bool:
    return bracket(h, e) == 2 * e and bracket(h, f) == -2 * f and bracket(e, f) == h


def sl2_complete(e: QElement, G: Grading) -> tuple[QElement, QElement]:
    """Grading-homogeneous triple with ``h`` in degree 0 and ``f`` in degree -2."""
    n = e.n
    if e.is_zero():
        return QElement(n), QElement(n)
    h_std, _ = standard_triple(e)
    h0 = G.component(h_std, 0)
    if bracket(h0, e) != 2 * e:
        raise TripleNotFound("degree-0 part of h does not act by 2 on e")
    d = _dimq(n)
    unknowns = [k for k in G.indices_of_degree(-2) if k < n * n]
    cols = []
    for k in unknowns:
        u = QElement.basis(n, k)
        top = bracket(e, u).coords
        bottom = dict(bracket(h0, u).coords)
        axpy(bottom, 2, u.coords)
        col = dict(top)
        col.update({d + r: v for r, v in bottom.items()})
        cols.append(col)
    m = matrix_from_columns(cols, 2 * d)
    rhs = [h0.coords.get(r, 0) for r in range(d)] + [0] * d
    try:
        x = solve(m, rhs)
    except NoSolution:
        raise TripleNotFound("no f in degree -2 completes the triple") from None
    f = QElement(n, {k: c for k, c in zip(unknowns, x) if c})
    if not is_sl2_triple(e, h0, f):
        raise TripleNotFound("solved triple fails the sl(2) relations")
    return h0, f


# ---------------------------------------------------------------- datum


@dataclass
class NilpotentDatum:
    e: QElement
    E: QElement
    chi: LinearFunctional
    grading: Grading
    h: QElement
    f: QElement
    F: QElement
    pyramid: object = None

    @property
    def n(self) -> int:
        return self.e.n

    @classmethod
    def build(cls, e: QElement, G: Grading, pyramid=None) -> "NilpotentDatum":
        E = pi(e)
        h, f = sl2_complete(e, G)
        return cls(e, E, functional_from_element(E), G, h, f, pi(f), pyramid)

    @classmethod
    def from_pyramid(cls, P) -> "NilpotentDatum":
        return cls.build(nilpotent_from_pyramid(P), grading_from_pyramid(P), P)

    def h_weight(self, x: QElement):
        """Eigenvalue of ad h on ``x`` or None if ``x`` is not an eigenvector."""
        hx = bracket(self.h, x)
        if x.is_zero():
            return None
        k = min(x.coords)
        lam = hx.coords.get(k, 0) / x.coords[k]
        if hx == lam * x:
            return lam
        return None


# ---------------------------------------------------------------- the form on g_{-1}


@dataclass
class GramForm:
    even_indices: list
    odd_indices: list
    even: SparseMat
    odd: SparseMat
    cross_zero: bool
    entries: dict = field(repr=False, default_factory=dict)

    def pair(self, x: dict, y: dict) -> Fraction:
        tot = Fraction(0)
        for a, u in x.items():
            row = self.entries.get(a)
            if not row:
                continue
            for b, v in y.items():
                g = row.get(b)
                if g:
                    tot += u * g * v
        return tot

    def check(self) -> dict:
        ge, go = self.even, self.odd
        alt = ge.transpose().entries == {k: -v for k, v in ge.entries.items()} and all(
            ge.entries.get((i, i), 0) == 0 for i in range(ge.rows)
        )
        sym = go.transpose() == go
        return {
            "even_alternating": alt,
            "odd_symmetric": sym,
            "even_nondegenerate": rank(ge) == ge.rows,
            "odd_nondegenerate": rank(go) == go.rows,
            "cross_zero": self.cross_zero,
        }


def form_on_g_minus1(datum: NilpotentDatum) -> GramForm:
    n = datum.n
    nn = n * n
    idx = datum.grading.indices_of_degree(-1)
    ev = [k for k in idx if k < nn]
    od = [k for k in idx if k >= nn]
    entries: dict = {}
    cross = True
    for a in idx:
        xa = QElement.basis(n, a)
        for b in idx:
            v = datum.chi(bracket(xa, QElement.basis(n, b)))
            if v:
                entries.setdefault(a, {})[b] = v
                if (a < nn) != (b < nn):
                    cross = False

    def block(ks):
        pos = {k: i for i, k in enumerate(ks)}
        return SparseMat(
            len(ks), len(ks), {(pos[a], pos[b]): v for a, r in entries.items() for b, v in r.items() if a in pos and b in pos}
        )

    gram = GramForm(ev, od, block(ev), block(od), cross, entries)
    chk = gram.check()
    if not (chk["even_nondegenerate"] and chk["odd_nondegenerate"]):
        raise DegenerateForm(f"form on g_-1 is degenerate: {chk}")
    return gram


# ---------------------------------------------------------------- isotropic subspaces


@dataclass
class IsotropicChoice:
    mode: str
    l: Subspace
    l_perp: Subspace
    m: Subspace
    m_prime: Subspace

    def sudims(self) -> dict:
        return {k: getattr(self, k).sudim() for k in ("l", "l_perp", "m", "m_prime")}


def _greedy_lagrangian(indices: list, gram: GramForm) -> list[dict]:
    """Greedy hyperbolic pairing starting from coordinate vectors.

    Takes the lowest remaining isotropic vector ``u``, its lowest partner
    ``v``, keeps ``u`` and projects the rest onto the orthogonal of
    ``span(u, v)``.
    """
    vecs = [{k: Fraction(1)} for k in indices]
    lag = []
    while vecs:
        pick = None
        for i, u in enumerate(vecs):
            if gram.pair(u, u) != 0:
                continue
            for j, v in enumerate(vecs):
                if j != i and gram.pair(u, v) != 0:
                    pick = (i, j)
                    break
            if pick:
                break
        if pick is None:
            raise IsotropicConstructionFailure(f"no isotropic vector pairs among {len(vecs)} remaining")
        i, j = pick
        u, v = vecs[i], vecs[j]
        lag.append(u)
        uu, uv, vu, vv = gram.pair(u, u), gram.pair(u, v), gram.pair(v, u), gram.pair(v, v)
        det = uu * vv - vu * uv
        rest = []
        for t, w in enumerate(vecs):
            if t in (i, j):
                continue
            wu, wv = gram.pair(w, u), gram.pair(w, v)
            # solve  a<u,u> + b<v,u> = <w,u>,  a<u,v> + b<v,v> = <w,v>
            a = (wu * vv - vu * wv) / det
            b = (uu * wv - wu * uv) / det
            w = dict(w)
            axpy(w, -a, u)
            axpy(w, -b, v)
            rest.append(w)
        vecs = rest
    return lag


def isotropic_choice(datum: NilpotentDatum, mode: str = "lagrangian", gram: GramForm | None = None) -> IsotropicChoice:
    n = datum.n
    d = _dimq(n)
    nn = n * n
    G = datum.grading
    gm1 = G.indices_of_degree(-1)
    low = G.indices_where(lambda j: j <= -2)
    if mode == "zero":
        lvecs = []
    elif mode == "lagrangian":
        if gram is None:
            gram = form_on_g_minus1(datum) if gm1 else None
        if gram is None:
            lvecs = []
        else:
            if len(gram.even_indices) % 2 or len(gram.odd_indices) % 2:
                raise IsotropicConstructionFailure("g_-1 parts have odd dimension")
            for k in gm1:
                if gram.entries.get(k, {}).get(k, 0) != 0:
                    raise IsotropicConstructionFailure("Gram diagonal is not zero in the matrix-unit basis")
            lvecs = _greedy_lagrangian(gram.even_indices, gram) + _greedy_lagrangian(gram.odd_indices, gram)
    else:
        raise ValueError(f"unknown isotropic mode {mode!r}")
    l = Subspace.span(lvecs, d, nn)
    # l' = {x in g_-1 : <x, l> = 0}
    if gm1:
        pos = {k: i for i, k in enumerate(gm1)}
        rows = []
        for v in l.vectors():
            row = {}
            for k in gm1:
                g = datum.chi(bracket(QElement.basis(n, k), QElement(n, v)))
                if g:
                    row[pos[k]] = g
            rows.append(row)
        kk = kernel(SparseMat.from_rows(rows, len(gm1)))
        lp = Subspace.span([{gm1[i]: x for i, x in v.items()} for v in kk.vectors()], d, nn)
    else:
        lp = Subspace.zero(d, nn)
    low_sp = Subspace.coordinate(low, d, nn)
    m = subspace_sum(l, low_sp)
    mp = subspace_sum(lp, low_sp)
    return IsotropicChoice(mode, l, lp, m, mp)


def _elements(sub: Subspace, n: int) -> list[QElement]:
    return [QElement(n, v) for v in sub.vectors()]


def check_isotropic(datum: NilpotentDatum, choice: IsotropicChoice) -> dict:
    """Invariants of an isotropic choice: isotropy, inclusions, closure, character."""
    n = datum.n
    chi = datum.chi
    L = _elements(choice.l, n)
    M = _elements(choice.m, n)
    MP = _elements(choice.m_prime, n)
    iso = all(chi(bracket(x, y)) == 0 for x in L for y in L)
    incl = choice.l_perp.contains_subspace(choice.l) and choice.m_prime.contains_subspace(choice.m)
    closed_m = all(choice.m.contains(bracket(x, y).coords) for x in M for y in M)
    closed_mp = all(choice.m_prime.contains(bracket(x, y).coords) for x in MP for y in MP)
    character = all(chi(bracket(x, y)) == 0 for x in MP for y in M)
    return {
        "isotropic": iso,
        "inclusions": incl,
        "m_closed": closed_m,
        "m_prime_closed": closed_mp,
        "chi_character": character,
        "ok": iso and incl and closed_m and closed_mp and character,
    }


# ---------------------------------------------------------------- m-perp


@dataclass
class DecompositionReport:
    sudim_mperp: tuple
    sudim_image: tuple
    sudim_pi_gF: tuple
    sudim_intersection: tuple
    sum_equals_mperp: bool
    identity_rhs: tuple
    direct_sum: bool

    def to_json(self) -> dict:
        return {
            "lhs": list(self.sudim_mperp),
            "rhs_parts": [list(self.sudim_image), list(self.sudim_pi_gF)],
            "direct_sum": self.direct_sum,
        }


def perp(sub: Subspace, n: int) -> Subspace:
    """``{x : (x, v) = 0 for all v in sub}`` under the odd form."""
    d = _dimq(n)
    rows = []
    for v in sub.vectors():
        y = QElement(n, v)
        rows.append({k: odd_form(QElement.basis(n, k), y) for k in range(d)})
    rows = [{k: x for k, x in r.items() if x} for r in rows]
    k = kernel(SparseMat.from_rows(rows, d))
    return Subspace(d, k.basis, n * n)


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def mperp_decomposition(datum: NilpotentDatum, choice: IsotropicChoice, strict: bool = True) -> DecompositionReport:
    n = datum.n
    d = _dimq(n)
    nn = n * n
    mperp = perp(choice.m, n)
    image = Subspace.span([bracket(b, datum.E).coords for b in _elements(choice.m_prime, n)], d, nn)
    gF = centralizer(datum.F)
    pigF = Subspace.span([pi(x).coords for x in _elements(gF, n)], d, nn)
    inter = subspace_intersection(image, pigF)
    total = subspace_sum(image, pigF)
    s_mp = choice.m_prime.sudim()
    G = datum.grading
    rhs = _add(_add((s_mp[1], s_mp[0]), sudim_of_degree(G, 0)), sudim_of_degree(G, -1))
    rep = DecompositionReport(
        mperp.sudim(),
        image.sudim(),
        pigF.sudim(),
        inter.sudim(),
        total == mperp,
        rhs,
        False,
    )
    rep.direct_sum = (
        inter.dim == 0
        and rep.sum_equals_mperp
        and _add(rep.sudim_image, rep.sudim_pi_gF) == rep.sudim_mperp
        and rhs == rep.sudim_mperp
    )
    if strict and not rep.direct_sum:
        raise DecompositionFailure(f"m-perp decomposition fails: {rep}")
    return rep


# ---------------------------------------------------------------- grading properties


@dataclass
class PropertiesReport:
    ranks: dict  # j -> (rank of ad E on g_j, dim g_j, dim g_{j+2})
    injective_ok: bool
    surjective_ok: bool
    sudim_gE: tuple
    sudim_g0_plus_g1: tuple
    dimension_identity: bool

    @property
    def ok(self) -> bool:
        return self.injective_ok and self.surjective_ok and self.dimension_identity


def check_grading_properties(datum: NilpotentDatum) -> PropertiesReport:
    n = datum.n
    G = datum.grading
    degs = G.support()
    lo, hi = min(degs), max(degs)
    ranks = {}
    inj = surj = True
    for j in range(lo - 2, hi + 1):
        src = G.indices_of_degree(j)
        tgt_dim = len(G.indices_of_degree(j + 2))
        r = rank(SparseMat.from_rows([bracket(datum.E, QElement.basis(n, k)).coords for k in src], _dimq(n))) if src else 0
        if src or tgt_dim:
            ranks[j] = (r, len(src), tgt_dim)
        if j <= -1 and r != len(src):
            inj = False
        if j >= -1 and r != tgt_dim:
            surj = False
    gE = centralizer(datum.E).sudim()
    rhs = _add(sudim_of_degree(G, 0), sudim_of_degree(G, 1))
    return PropertiesReport(ranks, inj, surj, gE, rhs, gE == rhs)
