"""Annular morphisms: hom spaces over a cylinder and their composition.

A morphism X -> Y here is a diagram on a cylinder with boundary words X
(bottom) and Y (top); cutting the cylinder along a vertical seam turns it
into the data of one plane morphism per simple seam label S, living in
Hom_C(S (x) X, Y (x) S).  Morphisms are stored as coefficient vectors over
a fixed basis of each such space (pairs of splitting trees), and all
composition/rotation operations are compiled down to the tree calculus.

Orientation conventions (frozen; the verification suite depends on them):

* component sources read (seam letter,) + X and targets Y + (seam letter,);
* stacking g after f fuses g's seam strand outside f's: the composite seam
  U splits as U -> (S_g, S_f);
* in the double-strand idempotent on (I, J) the seam crosses over I and
  under J; in the seam-loop endomorphism of S the order is reversed;
* the wrap endomorphism t carries the boundary word itself on the seam,
  and its inverse carries the dual word, closed up with cups and caps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .category import ConsistencyReport, MTCData, compute_modular_data
from .trees import UNIT, Calculus, EngineError, Mor, Tree, Word


@dataclass(frozen=True)
class TubeObject:
    word: Word

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(x) for x in self.word))


@dataclass(frozen=True)
class DirectSumObject:
    summands: tuple[Word, ...]


@dataclass(frozen=True)
class BasisElement:
    seam: int
    root: int
    tree_in: Tree
    tree_out: Tree


@dataclass
class HomBasis:
    source: Word
    target: Word
    elements: dict[int, list[BasisElement]]
    total_dim: int
    pairing: np.ndarray | None = field(default=None, repr=False)

    def seam_dim(self, seam: int) -> int:
        return len(self.elements.get(seam, []))

    def all_elements(self) -> list[BasisElement]:
        out = []
        for seam in sorted(self.elements):
            out.extend(self.elements[seam])
        return out


@dataclass
class TubeMorphism:
    source: Word
    target: Word
    coeffs: dict[int, np.ndarray]

    def seam_vector(self, seam: int, dim: int) -> np.ndarray:
        vec = self.coeffs.get(seam)
        if vec is None:
            return np.zeros(dim, dtype=complex)
        return vec

    def norm(self) -> float:
        vals = [float(np.abs(v).max()) for v in self.coeffs.values() if v.size]
        return max(vals) if vals else 0.0

    def __add__(self, other: "TubeMorphism") -> "TubeMorphism":
        if (other.source, other.target) != (self.source, self.target):
            raise EngineError("shape mismatch in tube morphism sum")
        out = {s: v.copy() for s, v in self.coeffs.items()}
        for s, v in other.coeffs.items():
            out[s] = out[s] + v if s in out else v.copy()
        return TubeMorphism(self.source, self.target, out)

    def __mul__(self, scalar: complex) -> "TubeMorphism":
        return TubeMorphism(
            self.source, self.target, {s: scalar * v for s, v in self.coeffs.items()}
        )

    __rmul__ = __mul__

    def __sub__(self, other: "TubeMorphism") -> "TubeMorphism":
        return self + (-1.0) * other

    def distance(self, other: "TubeMorphism") -> float:
        return (self - other).norm()


def _as_word(x) -> Word:
    if isinstance(x, TubeObject):
        return x.word
    if isinstance(x, int):
        return (x,)
    return tuple(int(v) for v in x)


class TubeEngine:
    """Constructs and composes annular morphisms over one category."""

    def __init__(self, cat: MTCData):
        self.cat = cat
        self.calc = Calculus(cat)
        self.nlab = cat.size
        self.d = self.calc.d
        self.total_dim = self.calc.total_dim
        self.tolerance = max(cat.tolerance, 1e-8)
        self._hom: dict[tuple[Word, Word], HomBasis] = {}
        self._outer: dict[tuple, tuple[Mor, Mor]] = {}
        self._eps: dict[tuple[int, int], TubeMorphism] = {}
        self._iso: dict[tuple[int, int, int], TubeMorphism] = {}
        self._gamma: dict[tuple[int, int, int], TubeMorphism] = {}
        self._twist: dict[Word, TubeMorphism] = {}
        self._twist_inv: dict[Word, TubeMorphism] = {}
        self._identity: dict[Word, TubeMorphism] = {}
        self._md = None

    @property
    def modular(self):
        if self._md is None:
            self._md = compute_modular_data(self.cat)
        return self._md

    # ------------------------------------------------------------- hom spaces

    def hom_basis(self, X, Y) -> HomBasis:
        X, Y = _as_word(X), _as_word(Y)
        key = (X, Y)
        cached = self._hom.get(key)
        if cached is not None:
            return cached
        calc = self.calc
        elements: dict[int, list[BasisElement]] = {}
        total = 0
        for seam in range(self.nlab):
            src_word = (seam,) + X
            dst_word = Y + (seam,)
            src_basis = calc.tree_basis(src_word)
            dst_basis = calc.tree_basis(dst_word)
            elems: list[BasisElement] = []
            for c in sorted(dst_basis):
                tis = src_basis.get(c, [])
                if not tis:
                    continue
                for to in dst_basis[c]:
                    for ti in tis:
                        elems.append(BasisElement(seam, c, ti, to))
            if elems:
                elements[seam] = elems
                total += len(elems)
        hb = HomBasis(X, Y, elements, total)
        self._hom[key] = hb
        return hb

    def component(self, alpha: TubeMorphism, seam: int) -> Mor:
        """The Hom_C((seam,)+X, Y+(seam,)) component of a tube morphism."""
        X, Y = alpha.source, alpha.target
        calc = self.calc
        src_word, dst_word = (seam,) + X, Y + (seam,)
        hb = self.hom_basis(X, Y)
        elems = hb.elements.get(seam, [])
        vec = alpha.coeffs.get(seam)
        blocks: dict[int, np.ndarray] = {}
        if vec is not None and elems:
            pos = 0
            src_basis = calc.tree_basis(src_word)
            dst_basis = calc.tree_basis(dst_word)
            for c in sorted(dst_basis):
                tis = src_basis.get(c, [])
                tos = dst_basis[c]
                if not tis or not tos:
                    continue
                blk = vec[pos : pos + len(tos) * len(tis)].reshape(len(tos), len(tis))
                pos += len(tos) * len(tis)
                if np.any(blk):
                    blocks[c] = blk.astype(complex)
        return Mor(src_word, dst_word, blocks, calc)

    def from_components(self, X, Y, comps: dict[int, Mor]) -> TubeMorphism:
        """Assemble a tube morphism from plane components keyed by seam."""
        X, Y = _as_word(X), _as_word(Y)
        calc = self.calc
        coeffs: dict[int, np.ndarray] = {}
        for seam, mor in comps.items():
            src_word, dst_word = (seam,) + X, Y + (seam,)
            if (mor.src, mor.dst) != (src_word, dst_word):
                raise EngineError(
                    f"component at seam {seam} has words {mor.src}->{mor.dst}"
                )
            src_basis = calc.tree_basis(src_word)
            dst_basis = calc.tree_basis(dst_word)
            parts = []
            for c in sorted(dst_basis):
                tis = src_basis.get(c, [])
                tos = dst_basis[c]
                if not tis or not tos:
                    continue
                parts.append(np.asarray(mor.block(c), dtype=complex).ravel())
            if parts:
                vec = np.concatenate(parts)
                if np.abs(vec).max() > 0:
                    coeffs[seam] = vec
        return TubeMorphism(X, Y, coeffs)

    def basis_morphism(self, elem: BasisElement, X, Y) -> TubeMorphism:
        X, Y = _as_word(X), _as_word(Y)
        hb = self.hom_basis(X, Y)
        elems = hb.elements[elem.seam]
        vec = np.zeros(len(elems), dtype=complex)
        vec[elems.index(elem)] = 1.0
        return TubeMorphism(X, Y, {elem.seam: vec})

    def zero_morphism(self, X, Y) -> TubeMorphism:
        return TubeMorphism(_as_word(X), _as_word(Y), {})

    def identity_morphism(self, X) -> TubeMorphism:
        X = _as_word(X)
        cached = self._identity.get(X)
        if cached is None:
            calc = self.calc
            mor = calc.unit_intro_right(X) @ calc.unit_elim_left(X)
            cached = self.from_components(X, X, {UNIT: mor})
            self._identity[X] = cached
        return cached

    # ------------------------------------------------------------ composition

    def _outer_maps(self, X: Word, Z: Word, sg: int, sf: int, u: int):
        key = (X, Z, sg, sf, u)
        cached = self._outer.get(key)
        if cached is None:
            calc = self.calc
            w = calc.vertex(sg, sf, u)
            right = calc.tensor_id_right_word(w, X)
            left = calc.tensor_id_left_word(Z, w.dagger())
            cached = (left, right)
            self._outer[key] = cached
        return cached

    def compose(self, g: TubeMorphism, f: TubeMorphism) -> TubeMorphism:
        """g after f.  The two seam strands fuse into every admissible simple,
        with g's strand passing outside f's."""
        if f.target != g.source:
            raise EngineError(
                f"cannot stack {f.source}->{f.target} under {g.source}->{g.target}"
            )
        calc = self.calc
        X, Y, Z = f.source, f.target, g.target
        out: dict[int, Mor] = {}
        f_parts = {
            s: self.component(f, s) for s, v in f.coeffs.items() if np.abs(v).max() > 0
        }
        g_parts = {
            s: self.component(g, s) for s, v in g.coeffs.items() if np.abs(v).max() > 0
        }
        for sg, gmor in g_parts.items():
            for sf, fmor in f_parts.items():
                mid = calc.tensor_id_right(gmor, sf) @ calc.tensor_id_left(sg, fmor)
                for u in range(self.nlab):
                    if not calc.N[sg, sf, u]:
                        continue
                    left, right = self._outer_maps(X, Z, sg, sf, u)
                    res = left @ mid @ right
                    if u in out:
                        out[u] = out[u] + res
                    else:
                        out[u] = res
        return self.from_components(X, Z, out)

    def tube_trace(self, alpha: TubeMorphism) -> complex:
        """Trace of an annular endomorphism: cap the seam with the unit and
        take the quantum trace of the resulting plane endomorphism."""
        if alpha.source != alpha.target:
            raise EngineError("tube trace needs an endomorphism")
        X = alpha.source
        calc = self.calc
        comp = self.component(alpha, UNIT)
        plane = calc.unit_elim_right(X) @ comp @ calc.unit_intro_left(X)
        return plane.qtrace()

    def pairing_matrix(self, X, Y) -> np.ndarray:
        """Matrix of (b, b*) -> trace(b* . b) over the bases of Hom(X, Y)
        and Hom(Y, X)."""
        X, Y = _as_word(X), _as_word(Y)
        hb_f = self.hom_basis(X, Y)
        hb_b = self.hom_basis(Y, X)
        if hb_f.pairing is not None:
            return hb_f.pairing
        rows = hb_f.all_elements()
        cols = hb_b.all_elements()
        mat = np.zeros((len(rows), len(cols)), dtype=complex)
        for i, bi in enumerate(rows):
            fi = self.basis_morphism(bi, X, Y)
            for j, bj in enumerate(cols):
                if self.cat.ring.dual[bi.seam] != bj.seam:
                    continue
                gj = self.basis_morphism(bj, Y, X)
                mat[i, j] = self.tube_trace(self.compose(gj, fi))
        hb_f.pairing = mat
        return mat

    # ------------------------------------------------- distinguished elements

    def epsilon_idempotent(self, I: int, J: int) -> TubeMorphism:
        """The weighted seam-average idempotent on the word (I, J): the seam
        strand crosses over I and under J."""
        key = (I, J)
        cached = self._eps.get(key)
        if cached is not None:
            return cached
        calc = self.calc
        X = (I, J)
        comps: dict[int, Mor] = {}
        for s in range(self.nlab):
            over = calc.braid((s, I, J), 1, 1)
            under = calc.braid((I, s, J), 2, -1)
            comps[s] = (self.d[s] / self.total_dim) * (under @ over)
        mor = self.from_components(X, X, comps)
        self._eps[key] = mor
        return mor

    def twist_automorphism(self, X) -> TubeMorphism:
        """Wrap endomorphism t_X: the boundary strand travels once around the
        cylinder through a cap and a cup, so the seam carries the dual word.
        On the (I, J) block of a representation it acts by theta_I/theta_J."""
        X = _as_word(X)
        cached = self._twist.get(X)
        if cached is not None:
            return cached
        calc = self.calc
        dw = calc.dual_word(X)
        pattern = calc.coev_word(X) @ calc.ev_word(X)
        comps: dict[int, Mor] = {}
        for t in range(self.nlab):
            trees = calc.trees(t, dw)
            if not trees:
                continue
            acc = None
            for tree in trees:
                sigma = calc.tree_mor(t, dw, tree)
                term = (
                    calc.tensor_id_left_word(X, sigma.dagger())
                    @ pattern
                    @ calc.tensor_id_right_word(sigma, X)
                )
                acc = term if acc is None else acc + term
            comps[t] = acc
        mor = self.from_components(X, X, comps)
        self._twist[X] = mor
        return mor

    def twist_inverse(self, X) -> TubeMorphism:
        """Reverse wrap: the strand circles the other way, so the seam
        carries the boundary word itself."""
        X = _as_word(X)
        cached = self._twist_inv.get(X)
        if cached is not None:
            return cached
        calc = self.calc
        comps: dict[int, Mor] = {}
        for t in range(self.nlab):
            trees = calc.trees(t, X)
            if not trees:
                continue
            acc = None
            for tree in trees:
                sigma = calc.tree_mor(t, X, tree)
                term = calc.tensor_id_left_word(X, sigma.dagger()) @ (
                    calc.tensor_id_right_word(sigma, X)
                )
                acc = term if acc is None else acc + term
            comps[t] = acc
        mor = self.from_components(X, X, comps)
        self._twist_inv[X] = mor
        return mor

    def gamma(self, I: int, J: int, S: int) -> TubeMorphism:
        """Seam-loop endomorphism of (S,): two meridian loops cross the
        vertical S strand, the first under it, the second over.  Read along
        the seam, their content is (I, J); both loops cross the seam along
        its orientation."""
        key = (I, J, S)
        cached = self._gamma.get(key)
        if cached is not None:
            return cached
        calc = self.calc
        V = (I, J)
        comps: dict[int, Mor] = {}
        for t in range(self.nlab):
            trees = calc.trees(t, V)
            if not trees:
                continue
            w = calc.tree_mor(t, V, trees[0])
            moves = calc.braid((I, S, J), 1, -1) @ calc.braid((I, J, S), 2, 1)
            comp = (
                calc.tensor_id_left(S, w.dagger())
                @ moves
                @ calc.tensor_id_right_word(w, (S,))
            )
            comps[t] = comp
        mor = self.from_components((S,), (S,), comps)
        self._gamma[key] = mor
        return mor

    def isotypic_idempotent(self, S: int, A: int, B: int) -> TubeMorphism:
        """Projection of (S,) onto its (A, B) isotypic part: the seam strand
        passes between the two branches of a splitting of S into A (x) B."""
        key = (S, A, B)
        cached = self._iso.get(key)
        if cached is not None:
            return cached
        calc = self.calc
        if not calc.N[A, B, S]:
            mor = self.zero_morphism((S,), (S,))
            self._iso[key] = mor
            return mor
        b = calc.vertex(A, B, S)
        bstar = (1.0 / self.d[S]) * b.dagger()
        comps: dict[int, Mor] = {}
        scale0 = self.d[A] * self.d[B] / self.total_dim
        for t in range(self.nlab):
            moves = calc.braid((A, t, B), 2, -1) @ calc.braid((t, A, B), 1, 1)
            comp = (
                calc.tensor_id_right(bstar, t)
                @ moves
                @ calc.tensor_id_left(t, b)
            )
            comps[t] = (scale0 * self.d[t]) * comp
        mor = self.from_components((S,), (S,), comps)
        self._iso[key] = mor
        return mor

    def big_t(self) -> DirectSumObject:
        return DirectSumObject(tuple((s,) for s in range(self.nlab)))

    def nu(self, I: int, J: int) -> dict[int, TubeMorphism]:
        """Block-diagonal endomorphism of the sum of all single-letter
        objects; block S is (d(S)/d(C)) times the seam loop."""
        return {
            s: (self.d[s] / self.total_dim) * self.gamma(I, J, s)
            for s in range(self.nlab)
        }

    def verify_handle_slide(self, I: int, J: int, S: int) -> ConsistencyReport:
        """Check that the seam loop equals the S-matrix-weighted sum of
        isotypic projections."""
        smat = self.modular.s_matrix
        lhs = self.gamma(I, J, S)
        rhs = self.zero_morphism((S,), (S,))
        for a in range(self.nlab):
            for b in range(self.nlab):
                coeff = smat[I, a] * smat[b, J] / (self.d[a] * self.d[b])
                rhs = rhs + coeff * self.isotypic_idempotent(S, a, b)
        scale = max(1.0, lhs.norm(), rhs.norm())
        resid = lhs.distance(rhs) / scale
        return ConsistencyReport(
            f"handle_slide(I={I},J={J},S={S})",
            resid <= self.tolerance,
            resid,
            1,
            [] if resid <= self.tolerance else [f"residual {resid:.3e}"],
        )

    # -------------------------------------------------------------- rotations

    def rotate_pattern(
        self, f: Mor, seam: Word, bdry: Word, tilde_coev: bool = False,
        tilde_ev: bool = False,
    ) -> Mor:
        """Quarter-turn of a seam-word component: boundary becomes seam.

        Input lives in Hom(seam + bdry, bdry + seam); output in
        Hom(dual(bdry) + seam, seam + dual(bdry)).  The old boundary output
        is capped against the new seam-in, and the old boundary input is fed
        from a cup whose other end becomes the new seam-out.  The tilde
        flags select the opposite-handed cup/cap with the same word order.
        """
        calc = self.calc
        dw = calc.dual_word(bdry)
        cup = calc.coev_word(dw, True) if tilde_coev else calc.coev_word(bdry)
        cap = calc.ev_word(dw, True) if tilde_ev else calc.ev_word(bdry)
        step1 = calc.tensor_id_left_word(dw + seam, cup)
        step2 = calc.tensor_id_left_word(dw, calc.tensor_id_right_word(f, dw))
        step3 = calc.tensor_id_right_word(cap, seam + dw)
        return step3 @ step2 @ step1

    def rotations_of_endo(
        self,
        alpha: TubeMorphism,
        left_tags: tuple[bool, bool] = (False, False),
        right_tags: tuple[bool, bool] = (False, False),
    ) -> tuple[dict[int, TubeMorphism], dict[int, TubeMorphism]]:
        """Both quarter-turn transports of an endomorphism of X onto the
        single-letter objects: left[s] acts on (s,) with seam content
        dual(X); right[s] acts on (dual s,) with seam content X."""
        X = alpha.source
        calc = self.calc
        dw = calc.dual_word(X)
        left: dict[int, TubeMorphism] = {}
        right: dict[int, TubeMorphism] = {}
        for s, vec in alpha.coeffs.items():
            if not np.abs(vec).max() > 0:
                continue
            f = self.component(alpha, s)
            g = self.rotate_pattern(f, (s,), X, *left_tags)
            left[s] = self._split_seam(g, dw, (s,))
            gd = self.rotate_pattern(f.dagger(), X, (s,), *right_tags)
            g_b = gd.dagger()
            right[calc.dual[s]] = self._split_seam(g_b, X, (calc.dual[s],))
        return left, right

    def _split_seam(self, g: Mor, seam_word: Word, bdry: Word) -> TubeMorphism:
        """Resolve a word-valued seam into simple components: g lives in
        Hom(seam_word + bdry, bdry + seam_word)."""
        calc = self.calc
        comps: dict[int, Mor] = {}
        for t in range(self.nlab):
            trees = calc.trees(t, seam_word)
            if not trees:
                continue
            acc = None
            for tree in trees:
                sigma = calc.tree_mor(t, seam_word, tree)
                term = (
                    calc.tensor_id_left_word(bdry, sigma.dagger())
                    @ g
                    @ calc.tensor_id_right_word(sigma, bdry)
                )
                acc = term if acc is None else acc + term
            if acc is not None:
                comps[t] = acc
        return self.from_components(bdry, bdry, comps)


# ------------------------------------------------------------- verification


def verify_idempotents(eng: TubeEngine, tolerance: float = 1e-8) -> ConsistencyReport:
    """Orthogonal-idempotent axioms for the seam-average family: each is
    idempotent, distinct ones annihilate through every connecting
    morphism, and each compresses its endomorphism algebra to rank one
    (primitivity proxy via the trace pairing)."""
    n = eng.nlab
    worst = 0.0
    failures: list[str] = []
    checked = 0
    eps = {(i, j): eng.epsilon_idempotent(i, j) for i in range(n) for j in range(n)}
    for (i, j), e in eps.items():
        resid = eng.compose(e, e).distance(e) / max(1.0, e.norm())
        worst = max(worst, resid)
        checked += 1
        if resid > tolerance:
            failures.append(f"eps({i},{j}) not idempotent: residual {resid:.3e}")
        for (k, l), f in eps.items():
            if (k, l) == (i, j):
                continue
            for b in eng.hom_basis((k, l), (i, j)).all_elements():
                h = eng.basis_morphism(b, (k, l), (i, j))
                resid = eng.compose(e, eng.compose(h, f)).norm() / max(1.0, h.norm())
                worst = max(worst, resid)
                checked += 1
                if resid > tolerance:
                    failures.append(
                        f"eps({i},{j})∘h∘eps({k},{l}) nonzero: residual {resid:.3e}"
                    )
    for (i, j), e in eps.items():
        # Compression of End(I, J) by eps: the matrix of tube traces
        # tr(eps∘a∘eps∘b) over a basis has rank one exactly when the
        # idempotent cuts out a single matrix block.
        basis = [
            eng.compose(e, eng.compose(eng.basis_morphism(b, (i, j), (i, j)), e))
            for b in eng.hom_basis((i, j), (i, j)).all_elements()
        ]
        gram = np.array(
            [[eng.tube_trace(eng.compose(a, b)) for b in basis] for a in basis]
        )
        sv = np.linalg.svd(gram, compute_uv=False)
        rank = int((sv > tolerance * max(1.0, sv[0] if sv.size else 1.0)).sum())
        checked += 1
        if rank != 1:
            failures.append(f"eps({i},{j}) compressed pairing rank {rank} != 1")
            worst = max(worst, 1.0)
    return ConsistencyReport("idempotents", not failures, worst, checked, failures)


def verify_isotypic_partition(eng: TubeEngine, tolerance: float = 1e-8) -> ConsistencyReport:
    """The seam-resolved projections on each single-letter object sum to the
    identity endomorphism."""
    worst = 0.0
    failures: list[str] = []
    for s in range(eng.nlab):
        total = eng.zero_morphism((s,), (s,))
        for a in range(eng.nlab):
            for b in range(eng.nlab):
                total = total + eng.isotypic_idempotent(s, a, b)
        resid = total.distance(eng.identity_morphism((s,)))
        worst = max(worst, resid)
        if resid > tolerance:
            failures.append(f"partition on object {s}: residual {resid:.3e}")
    return ConsistencyReport("isotypic_partition", not failures, worst, eng.nlab, failures)


def verify_handle_slides(eng: TubeEngine, tolerance: float = 1e-8) -> ConsistencyReport:
    """Aggregate the seam-loop expansion check over all triples."""
    worst = 0.0
    failures: list[str] = []
    checked = 0
    n = eng.nlab
    for i in range(n):
        for j in range(n):
            for s in range(n):
                rep = eng.verify_handle_slide(i, j, s)
                worst = max(worst, rep.max_residual)
                checked += 1
                if rep.max_residual > tolerance:
                    failures.append(
                        f"(I={i},J={j},S={s}) residual {rep.max_residual:.3e}"
                    )
    return ConsistencyReport("handle_slide", not failures, worst, checked, failures)


def verify_twist_invertibility(eng: TubeEngine, tolerance: float = 1e-8) -> ConsistencyReport:
    """The wrap endomorphism composed with its inverse is the identity on
    every single-letter object."""
    worst = 0.0
    failures: list[str] = []
    for s in range(eng.nlab):
        t_fwd = eng.twist_automorphism((s,))
        t_bwd = eng.twist_inverse((s,))
        ident = eng.identity_morphism((s,))
        r1 = eng.compose(t_fwd, t_bwd).distance(ident)
        r2 = eng.compose(t_bwd, t_fwd).distance(ident)
        resid = max(r1, r2)
        worst = max(worst, resid)
        if resid > tolerance:
            failures.append(f"object {s}: residual {resid:.3e}")
    return ConsistencyReport("twist_invertibility", not failures, worst, eng.nlab, failures)
