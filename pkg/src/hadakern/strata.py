"""Orbit-constant partitions, the stratification partition and its certificates.

Rank-one certificates are kept exact without square roots: block ``j`` is
described by a vector ``u_j`` whose first entry is 1 (or the zero vector) and
the compressed matrix ``C`` carries the scale on its diagonal, so that
``A[I_i x I_j] == c_ij * u_i u_j^*``.  Rescaling ``u_j`` by ``sqrt(c_jj)``
gives the unit-normalised form in which ``C`` has ones on the diagonal; the
disc bounds on ``C`` are therefore checked as ``|c_ij|^2 <= c_ii c_jj``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    ConditionsViolated,
    EntriesNotUnimodular,
    NotBlockConstant,
    NotThreePmp,
    VerificationFailed,
)
from .groups import GroupSpec, orbit_equivalent, orbit_label
from .matrix import HermitianMatrix, Matrix, rank, signature
from .partitions import Partition, UnionFind
from .pmp import _require_hermitian, is_k_pmp, pmp_order
from .scalars import DEFAULT_TOLERANCE


def _tol(A: Matrix) -> float:
    return getattr(A.domain, "tolerance", DEFAULT_TOLERANCE)


def _use_labels(A: Matrix, G: GroupSpec) -> bool:
    return A.domain.exact


def _split(block: list[int], key_fn, eq_fn) -> list[list[int]]:
    """Split ``block`` into classes of an equivalence given by keys or pairwise tests."""
    if key_fn is not None:
        groups: dict = {}
        for i in block:
            groups.setdefault(key_fn(i), []).append(i)
        return list(groups.values())
    reps: list[list[int]] = []
    for i in block:
        for cls in reps:
            if eq_fn(cls[0], i):
                cls.append(i)
                break
        else:
            reps.append([i])
    return reps


def pi_min(A: Matrix, G: GroupSpec) -> Partition:
    """Coarsest partition whose block submatrices each lie in a single G-orbit.

    A partition qualifies iff indices sharing a block have entrywise
    G-equivalent rows and entrywise G-equivalent columns, so the answer is
    obtained by refining the single block against every row and column in
    turn; the result does not depend on the order of the refiners.
    """
    H = _require_hermitian(A)
    n = H.nrows
    r = H.rows
    tol = _tol(H)
    blocks = [list(range(n))]
    for j in range(n):
        for col in (True, False):
            if col:
                def val(i, j=j):
                    return r[i][j]
            else:
                def val(i, j=j):
                    return r[j][i]
            if _use_labels(H, G):
                def key_fn(i, val=val):
                    return orbit_label(val(i), G)
                eq_fn = None
            else:
                key_fn = None

                def eq_fn(a, b, val=val):
                    return orbit_equivalent(val(a), val(b), G, tol)
            new_blocks = []
            for b in blocks:
                new_blocks.extend(_split(b, key_fn, eq_fn) if len(b) > 1 else [b])
            blocks = new_blocks
    return Partition(blocks, n)


def single_orbit(values: Sequence, G: GroupSpec, tol: float = DEFAULT_TOLERANCE) -> bool:
    values = list(values)
    first = values[0]
    return all(orbit_equivalent(v, first, G, tol) for v in values[1:])


def is_block_orbit_constant(A: Matrix, p: Partition, G: GroupSpec) -> bool:
    """Whether every block submatrix ``A[I_i x I_j]`` lies in one G-orbit."""
    tol = _tol(A)
    r = A.rows
    for bi in p.blocks:
        for bj in p.blocks:
            if not single_orbit([r[x][y] for x in bi for y in bj], G, tol):
                return False
    return True


def _cond_a(H: HermitianMatrix, idx: Sequence[int]) -> bool:
    """Diagonal block is u u^* for some u: rank <= 1 with non-negative diagonal."""
    dom = H.domain
    scale = H.scale()
    for i in idx:
        v = H.rows[i][i]
        if not dom.is_real(v, scale) or dom.real_sign(v, scale) < 0:
            return False
    if len(idx) == 1:
        return True
    return rank(H.submatrix(idx, idx)) <= 1


def _cond_b(H: HermitianMatrix, idx: Sequence[int], G: GroupSpec) -> bool:
    r = H.rows
    return single_orbit([r[x][y] for x in idx for y in idx], G, _tol(H))


@dataclass(frozen=True)
class StratumConditions:
    rank_one: bool
    single_orbit: bool
    maximal: bool
    failing_block: tuple[int, ...] | None = None

    @property
    def all(self) -> bool:
        return self.rank_one and self.single_orbit and self.maximal


def check_conditions(A: Matrix, p: Partition, G: GroupSpec) -> StratumConditions:
    """Evaluate the rank-one, single-orbit and maximality conditions on diagonal blocks.

    Maximality is read as: no block can absorb one more index and still be
    rank one and single-orbit (any larger qualifying block would contain such
    a one-step extension).
    """
    H = _require_hermitian(A)
    a_ok = b_ok = True
    bad = None
    for blk in p.blocks:
        if not _cond_a(H, blk):
            a_ok, bad = False, bad or blk
        if not _cond_b(H, blk, G):
            b_ok, bad = False, bad or blk
    maximal = True
    if a_ok and b_ok:
        for blk in p.blocks:
            inside = set(blk)
            for x in range(H.nrows):
                if x in inside:
                    continue
                ext = sorted(inside | {x})
                if _cond_a(H, ext) and _cond_b(H, ext, G):
                    maximal, bad = False, bad or blk
                    break
            if not maximal:
                break
    return StratumConditions(a_ok, b_ok, maximal, bad)


def _three_pmp_check(H: HermitianMatrix):
    k = min(3, H.nrows)
    verdict = is_k_pmp(H, k)
    if not verdict:
        shown = [i + 1 for i in verdict.witness]
        raise NotThreePmp(f"matrix is not {k}-PMP; violating index set {shown}", verdict.witness)


def pi_stratum(A: Matrix, G: GroupSpec) -> Partition:
    """The partition with rank-one, single-orbit, maximal diagonal blocks (3-PMP input).

    Inside the unit circle this coincides with :func:`pi_min`.  For larger
    groups indices are merged when their 2x2 principal block qualifies, and
    the result is verified.
    """
    H = _require_hermitian(A)
    _three_pmp_check(H)
    if G.in_unit_circle:
        p = pi_min(H, G)
    else:
        n = H.nrows
        uf = UnionFind(n)
        for i in range(n):
            for j in range(i + 1, n):
                if _cond_a(H, (i, j)) and _cond_b(H, (i, j), G):
                    uf.union(i, j)
        p = Partition(uf.groups(), n)
    cond = check_conditions(H, p, G)
    if not cond.all:
        raise VerificationFailed(
            f"partition {p} for group {G} fails the stratum conditions {cond}"
        )
    return p


@dataclass(frozen=True)
class StratumReport:
    partition: Partition
    group: GroupSpec
    vectors: tuple[tuple, ...]
    compressed: HermitianMatrix
    maximal: bool
    psd_input: bool
    pmp_order: int
    offdiagonal_single_orbit: bool
    rank_matches: bool
    disc_ok: bool | None = None
    open_disc_ok: bool | None = None
    flags: tuple[str, ...] = field(default_factory=tuple)

    def reconstruct(self) -> Matrix:
        """Rebuild the input from ``(partition, C, u_j)``."""
        C = self.compressed
        dom = C.domain
        n = self.partition.n
        rows = [[dom.zero] * n for _ in range(n)]
        for bi, (Ii, ui) in enumerate(zip(self.partition.blocks, self.vectors)):
            for bj, (Ij, uj) in enumerate(zip(self.partition.blocks, self.vectors)):
                c = C.rows[bi][bj]
                for p, up in zip(Ii, ui):
                    for q, uq in zip(Ij, uj):
                        rows[p][q] = c * up * dom.conj(uq)
        return Matrix._wrap(rows, dom)

    def normalized_modulus_squared(self, i: int, j: int):
        """``|c_ij|^2 / (c_ii c_jj)``: squared modulus in the unit-diagonal normalisation."""
        C = self.compressed
        cii, cjj = C.rows[i][i], C.rows[j][j]
        if not cii or not cjj:
            return 0
        return C.domain.abs2(C.rows[i][j]) / (_real(cii) * _real(cjj))

    def to_json(self) -> dict:
        enc = self.compressed.domain.to_json
        return {
            "partition": self.partition.to_json(),
            "group": str(self.group),
            "u": [[enc(x) for x in u] for u in self.vectors],
            "C": [[enc(x) for x in r] for r in self.compressed.rows],
            "maximal": self.maximal,
            "psd_input": self.psd_input,
            "pmp_order": self.pmp_order,
            "offdiagonal_single_orbit": self.offdiagonal_single_orbit,
            "rank_matches": self.rank_matches,
            "disc_ok": self.disc_ok,
            "open_disc_ok": self.open_disc_ok,
            "flags": list(self.flags),
        }


def _real(x):
    return x.re if hasattr(x, "re") else (x.real if isinstance(x, complex) else x)


def rank_one_certificates(A: Matrix, p: Partition, G: GroupSpec | None = None) -> StratumReport:
    """Vectors ``u_j`` and matrix ``C`` with ``A[I_i x I_j] = c_ij u_i u_j^*``.

    ``u_j`` has first entry 1 (zero vector for an all-zero block).  Raises
    :class:`ConditionsViolated` when a diagonal block is not rank one with a
    single orbit, or when the off-diagonal blocks do not factor.
    """
    G = G or GroupSpec.trivial()
    H = _require_hermitian(A)
    dom = H.domain
    scale = H.scale()
    tol = _tol(H)
    cond = check_conditions(H, p, G)
    if not (cond.rank_one and cond.single_orbit):
        raise ConditionsViolated(f"block {cond.failing_block} is not rank one in a single {G}-orbit")
    r = H.rows
    firsts = [b[0] for b in p.blocks]
    vectors = []
    nonzero = []
    flags = []
    for b in p.blocks:
        f = b[0]
        pivot = r[f][f]
        if dom.is_zero(pivot, scale):
            if not all(dom.is_zero(r[x][y], scale) for x in b for y in b):
                # only reachable with float round-off: the first entry vanished
                flags.append(f"block {list(b)} has zero leading entry")
            vectors.append(tuple(dom.zero for _ in b))
            nonzero.append(False)
            continue
        vectors.append(tuple(r[x][f] / pivot for x in b))
        nonzero.append(True)
    m = p.m
    crow = [[r[firsts[i]][firsts[j]] if nonzero[i] and nonzero[j] else dom.zero for j in range(m)] for i in range(m)]
    C = HermitianMatrix._trusted(Matrix._wrap(crow, dom))
    report_core = StratumReport(p, G, tuple(vectors), C, cond.maximal, False, 0, False, False)
    rebuilt = report_core.reconstruct()
    if rebuilt != Matrix._wrap(H.rows, dom):
        raise ConditionsViolated("off-diagonal blocks are not of the form c_ij u_i u_j^*")
    offdiag = all(
        single_orbit([r[x][y] for x in bi for y in bj], G, tol)
        for bi in p.blocks for bj in p.blocks
    )
    sig = signature(H)
    psd = sig.n_minus == 0
    k = pmp_order(H)
    rank_ok = rank(C) == rank(H)
    disc_ok = None
    open_disc = None
    probe = StratumReport(p, G, tuple(vectors), C, cond.maximal, psd, k, offdiag, rank_ok)
    if psd and dom.exact:
        ratios = [probe.normalized_modulus_squared(i, j) for i in range(m) for j in range(m) if i != j]
        disc_ok = all(x <= 1 for x in ratios) and all(_real(C.rows[i][i]) >= 0 for i in range(m))
        if G.kind == "nonzero" and cond.maximal:
            open_disc = all(x < 1 for x in ratios)
    return StratumReport(p, G, tuple(vectors), C, cond.maximal, psd, k, offdiag, rank_ok,
                         disc_ok, open_disc, tuple(flags))


def compression(A: Matrix, p: Partition) -> Matrix:
    """The m x m matrix of constant block values; raises if A is not block-constant."""
    dom = A.domain
    scale = A.scale()
    r = A.rows
    out = []
    for i, bi in enumerate(p.blocks):
        row = []
        for j, bj in enumerate(p.blocks):
            v = r[bi[0]][bj[0]]
            for x in bi:
                for y in bj:
                    if not dom.eq(r[x][y], v, scale):
                        raise NotBlockConstant(f"block ({i}, {j}) is not constant", (i, j))
            row.append(v)
        out.append(row)
    B = Matrix._wrap(out, dom)
    return HermitianMatrix._trusted(B) if isinstance(A, HermitianMatrix) else B


def block_inflate(C: Matrix, p: Partition) -> Matrix:
    """Inverse of :func:`compression`: constant value ``c_ij`` on block ``I_i x I_j``."""
    lab = p.labels()
    rows = [[C.rows[lab[x]][lab[y]] for y in range(p.n)] for x in range(p.n)]
    out = Matrix._wrap(rows, C.domain)
    return HermitianMatrix._trusted(out) if isinstance(C, HermitianMatrix) else out


@dataclass(frozen=True)
class HnsDecomposition:
    """``P = Q D`` with ``P^{-1} A P`` block diagonal of all-ones / all-zero blocks.

    ``permutation[s]`` is the original index placed at position ``s``;
    ``phases[s]`` is the unit-modulus diagonal entry of ``D`` at position ``s``.
    """

    permutation: tuple[int, ...]
    phases: tuple
    blocks: tuple[tuple[int, bool], ...]
    domain: object

    def unitary_monomial(self) -> Matrix:
        dom = self.domain
        n = len(self.permutation)
        rows = [[dom.zero] * n for _ in range(n)]
        for s, (orig, d) in enumerate(zip(self.permutation, self.phases)):
            rows[orig][s] = d
        return Matrix._wrap(rows, dom)

    def conjugate(self, A: Matrix) -> Matrix:
        """``(QD)^{-1} A (QD)``, using ``(QD)^{-1} = (QD)^*``."""
        P = self.unitary_monomial()
        return P.conj_transpose() @ Matrix._wrap(A.rows, A.domain) @ P

    def canonical_form(self) -> Matrix:
        dom = self.domain
        n = len(self.permutation)
        rows = [[dom.zero] * n for _ in range(n)]
        off = 0
        for size, is_ones in self.blocks:
            if is_ones:
                for i in range(off, off + size):
                    for j in range(off, off + size):
                        rows[i][j] = dom.one
            off += size
        return Matrix._wrap(rows, dom)

    def to_json(self) -> dict:
        enc = self.domain.to_json
        return {
            "permutation": [i + 1 for i in self.permutation],
            "phases": [enc(d) for d in self.phases],
            "blocks": [{"size": s, "ones": o} for s, o in self.blocks],
        }


def hns_decompose(A: Matrix) -> HnsDecomposition:
    """Unitary-monomial reduction of a 3-PMP matrix with entries of modulus 0 or 1.

    Each connected component of the nonzero pattern becomes an all-ones block
    with phases read off its first row; zero-diagonal indices form one
    all-zero block.  The input is then positive semidefinite.
    """
    H = _require_hermitian(A)
    dom = H.domain
    scale = H.scale()
    n = H.nrows
    r = H.rows
    for i in range(n):
        for j in range(n):
            m2 = dom.abs2(r[i][j])
            if not (dom.eq(m2, 0, scale) or dom.eq(m2, 1, scale)):
                raise EntriesNotUnimodular(f"|a[{i}][{j}]|^2 = {m2} is neither 0 nor 1")
    _three_pmp_check(H)
    uf = UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if not dom.is_zero(r[i][j], scale):
                uf.union(i, j)
    comps = sorted((sorted(g) for g in uf.groups()), key=lambda g: g[0])
    zero_idx = [g[0] for g in comps if len(g) == 1 and dom.is_zero(r[g[0]][g[0]], scale)]
    ones_comps = [g for g in comps if not (len(g) == 1 and g[0] in zero_idx)]
    ordered: list[tuple[list[int], bool]] = [(g, True) for g in ones_comps]
    if zero_idx:
        ordered.append((zero_idx, False))
    ordered.sort(key=lambda t: t[0][0])
    perm, phases, blocks = [], [], []
    for g, is_ones in ordered:
        f = g[0]
        for x in g:
            perm.append(x)
            phases.append(dom.conj(r[f][x]) if is_ones else dom.one)
        blocks.append((len(g), is_ones))
    dec = HnsDecomposition(tuple(perm), tuple(phases), tuple(blocks), dom)
    if dec.conjugate(H) != dec.canonical_form():
        raise VerificationFailed("unitary-monomial conjugation did not reach the block form")
    return dec
