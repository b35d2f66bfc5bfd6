"""Fusion-tree linear algebra for multiplicity-free modular categories.

Morphisms between tensor words of simple objects are stored block-wise over
simple roots: a morphism f: X -> Y is the family of matrices of the maps
Hom(c, X) -> Hom(c, Y), sigma |-> f . sigma, written in left-parenthesized
splitting-tree bases.  Composition is then plain block matrix multiplication,
and the braided/pivotal structure enters through a handful of move matrices
built from the F- and R-symbols.

Conventions (fixed once, asserted by the test suite):

* splitting trees on the word (w1, ..., wn) are the tuples of intermediate
  labels (m1, ..., mn) with m1 = w1, mn = root and every step
  (m_{k-1}, w_k) -> m_k admissible; the empty word has the unit as only root;
* F converts left- to right-parenthesized three-leaf splittings:
      (v[a,b->e] (x) id_c) . v[e,c->d]
        = sum_f F[a,b,c,d][e,f] (id_a (x) v[b,c->f]) . v[a,f->d]
* the positive braid (left strand crossing over the right) acts on splitting
  vertices as c_{a,b} . v[a,b->c] = R[a,b,c] v[b,a->c];
* all vertices are isometries (this requires unitary-gauge F-data), so the
  dual of a tree is simply its dagger.

Cups and caps carry sqrt(d) and a bending phase derived from
d(a) * F[a, dual(a), a, a][unit, unit]; the phase table is solved so that
every zig-zag is exactly the identity and every closed loop evaluates to
+d(a).  The two planar orientations of a bend can differ by that phase,
hence the ``tilde`` flag on ``coev``/``ev``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

UNIT = 0

Word = tuple[int, ...]
Tree = tuple[int, ...]


class EngineError(ValueError):
    """Raised when category data cannot support the tree calculus."""


def root_of(word: Word, tree: Tree) -> int:
    return tree[-1] if word else UNIT


@dataclass
class Mor:
    """A morphism between tensor words, one matrix block per simple root."""

    src: Word
    dst: Word
    blocks: dict[int, np.ndarray]
    calc: "Calculus" = field(repr=False)

    def block(self, c: int) -> np.ndarray:
        blk = self.blocks.get(c)
        if blk is None:
            rows = len(self.calc.trees(c, self.dst))
            cols = len(self.calc.trees(c, self.src))
            return np.zeros((rows, cols), dtype=complex)
        return blk

    def __matmul__(self, other: "Mor") -> "Mor":
        if other.dst != self.src:
            raise EngineError(
                f"cannot compose {other.src}->{other.dst} with {self.src}->{self.dst}"
            )
        out: dict[int, np.ndarray] = {}
        for c, blk in self.blocks.items():
            oblk = other.blocks.get(c)
            if oblk is not None:
                out[c] = blk @ oblk
        return Mor(other.src, self.dst, out, self.calc)

    def __add__(self, other: "Mor") -> "Mor":
        if (other.src, other.dst) != (self.src, self.dst):
            raise EngineError("shape mismatch in morphism sum")
        out = dict(self.blocks)
        for c, blk in other.blocks.items():
            out[c] = out[c] + blk if c in out else blk.copy()
        return Mor(self.src, self.dst, out, self.calc)

    def __mul__(self, scalar: complex) -> "Mor":
        return Mor(
            self.src, self.dst, {c: scalar * b for c, b in self.blocks.items()}, self.calc
        )

    __rmul__ = __mul__

    def __sub__(self, other: "Mor") -> "Mor":
        return self + (-1.0) * other

    def dagger(self) -> "Mor":
        return Mor(
            self.dst, self.src, {c: b.conj().T for c, b in self.blocks.items()}, self.calc
        )

    def norm(self) -> float:
        vals = [float(np.abs(b).max()) for b in self.blocks.values() if b.size]
        return max(vals) if vals else 0.0

    def distance(self, other: "Mor") -> float:
        return (self - other).norm()

    def qtrace(self) -> complex:
        """Quantum (spherical) trace; defined for endomorphisms only."""
        if self.src != self.dst:
            raise EngineError("quantum trace needs an endomorphism")
        tot = 0.0 + 0.0j
        for c, blk in self.blocks.items():
            if blk.size:
                tot += self.calc.d[c] * np.trace(blk)
        return complex(tot)


class Calculus:
    """Move-matrix engine over one category's F/R data."""

    def __init__(self, cat):
        ring = cat.ring
        self.cat = cat
        self.nlab = ring.size
        self.dual = tuple(ring.dual)
        self.N = ring.fusion
        self.d = np.array([float(x) for x in cat.qdim])
        self.sqrt_d = np.sqrt(self.d)
        self.total_dim = float(np.sum(self.d**2))
        self._tree_cache: dict[Word, dict[int, list[Tree]]] = {}
        self._tree_pos: dict[Word, dict[Tree, int]] = {}
        self._fmat: dict[tuple[int, int, int, int], tuple[list[int], list[int], np.ndarray]] = {}
        self._fmat_inv: dict[tuple[int, int, int, int], np.ndarray] = {}
        self._unzip: dict[tuple[int, int, Word], np.ndarray] = {}
        self._unzip_inv: dict[tuple[int, int, Word], np.ndarray] = {}
        self._braid_cache: dict[tuple[Word, int, int], Mor] = {}
        self._prepare()

    # ------------------------------------------------------------------ setup

    def _prepare(self):
        cat = self.cat
        n = self.nlab
        for key, fdat in self._iter_f_matrices():
            mat = fdat[2]
            if mat.shape[0] != mat.shape[1]:
                raise EngineError(f"F-matrix for {key} is not square")
            err = float(np.abs(mat @ mat.conj().T - np.eye(mat.shape[0])).max())
            if err > 1e-8:
                raise EngineError(f"F-matrix for {key} is not unitary (residual {err:.2e})")
            self._fmat[key] = fdat
            self._fmat_inv[key] = mat.conj().T
        kappa = np.zeros(n, dtype=complex)
        for a in range(n):
            ad = self.dual[a]
            kappa[a] = self.d[a] * cat.f_symbol(a, ad, a, a, UNIT, UNIT)
        for a in range(n):
            if abs(abs(kappa[a]) - 1.0) > 1e-6:
                raise EngineError(
                    f"bending phase for label {a} is not unimodular; "
                    "the tree calculus needs unitary-gauge data"
                )
            if abs(kappa[self.dual[a]] - np.conj(kappa[a])) > 1e-6:
                raise EngineError("bending phases of dual labels must be conjugate")
        self.kappa = kappa
        # Bend coefficients.  The four bends per label are
        #   coev_a        = u[a]  sqrt(d) v[a,a*->1]        : 1 -> (a, a*)
        #   ev_a          = v[a]  sqrt(d) v[a*,a->1]^dag    : (a*, a) -> 1
        #   coev~_a       = ut[a] sqrt(d) v[a*,a->1]        : 1 -> (a*, a)
        #   ev~_a         = vt[a] sqrt(d) v[a,a*->1]^dag    : (a, a*) -> 1
        # and u=1, v=conj(kappa), ut=kappa, vt=1 makes all four snake
        # identities exact, both orientation-matched loops equal to +d, and
        # gives dagger(coev) = ev~ and dagger(ev) = coev~ on the nose.
        self._bend_u = np.ones(n, dtype=complex)
        self._bend_v = np.conj(kappa)
        self._bend_ut = kappa.copy()
        self._bend_vt = np.ones(n, dtype=complex)

    def _iter_f_matrices(self):
        n = self.nlab
        N = self.N
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for dd in range(n):
                        erows = [e for e in range(n) if N[a, b, e] and N[e, c, dd]]
                        fcols = [f for f in range(n) if N[b, c, f] and N[a, f, dd]]
                        if not erows and not fcols:
                            continue
                        mat = np.array(
                            [
                                [self.cat.f_symbol(a, b, c, dd, e, f) for f in fcols]
                                for e in erows
                            ],
                            dtype=complex,
                        )
                        yield (a, b, c, dd), (erows, fcols, mat)

    def f_matrix(self, a, b, c, dd):
        return self._fmat.get((a, b, c, dd))

    # ------------------------------------------------------------------ trees

    def tree_basis(self, word: Word) -> dict[int, list[Tree]]:
        cached = self._tree_cache.get(word)
        if cached is not None:
            return cached
        if len(word) == 0:
            basis = {UNIT: [()]}
        elif len(word) == 1:
            basis = {word[0]: [(word[0],)]}
        else:
            prev = self.tree_basis(word[:-1])
            z = word[-1]
            basis = {}
            for m in sorted(prev):
                for c in range(self.nlab):
                    if self.N[m, z, c]:
                        basis.setdefault(c, []).extend(t + (c,) for t in prev[m])
        self._tree_cache[word] = basis
        self._tree_pos[word] = {t: i for c in basis for i, t in enumerate(basis[c])}
        return basis

    def trees(self, c: int, word: Word) -> list[Tree]:
        return self.tree_basis(word).get(c, [])

    def tree_index(self, word: Word, tree: Tree) -> int:
        self.tree_basis(word)
        return self._tree_pos[word][tree]

    def dual_word(self, word: Word) -> Word:
        return tuple(self.dual[w] for w in reversed(word))

    def hom_dim(self, c: int, word: Word) -> int:
        return len(self.trees(c, word))

    # ------------------------------------------------------------- morphisms

    def zero(self, src: Word, dst: Word) -> Mor:
        return Mor(src, dst, {}, self)

    def identity(self, word: Word) -> Mor:
        basis = self.tree_basis(word)
        return Mor(
            word,
            word,
            {c: np.eye(len(ts), dtype=complex) for c, ts in basis.items() if ts},
            self,
        )

    def tree_mor(self, c: int, word: Word, tree: Tree) -> Mor:
        """A splitting-tree basis element as a morphism (c,) -> word."""
        ts = self.trees(c, word)
        col = np.zeros((len(ts), 1), dtype=complex)
        col[ts.index(tree), 0] = 1.0
        return Mor((c,), word, {c: col}, self)

    def vertex(self, a: int, b: int, c: int) -> Mor:
        """Splitting vertex (c,) -> (a, b), isometry normalized."""
        if not self.N[a, b, c]:
            raise EngineError(f"({a},{b}->{c}) is not an admissible vertex")
        return self.tree_mor(c, (a, b), (a, c))

    def unit_elim_left(self, word: Word) -> Mor:
        """(unit,) + word -> word.  With unit-gauge data this is a relabeling
        of tree bases, so every block is an identity matrix."""
        basis = self.tree_basis(word)
        blocks = {c: np.eye(len(ts), dtype=complex) for c, ts in basis.items() if ts}
        return Mor((UNIT,) + word, word, blocks, self)

    def unit_elim_right(self, word: Word) -> Mor:
        """word + (unit,) -> word; identity blocks, as for unit_elim_left."""
        basis = self.tree_basis(word)
        blocks = {c: np.eye(len(ts), dtype=complex) for c, ts in basis.items() if ts}
        return Mor(word + (UNIT,), word, blocks, self)

    def unit_intro_left(self, word: Word) -> Mor:
        return self.unit_elim_left(word).dagger()

    def unit_intro_right(self, word: Word) -> Mor:
        return self.unit_elim_right(word).dagger()

    # ---------------------------------------------------------- tensor moves

    def tensor_id_right(self, f: Mor, z: int) -> Mor:
        """f (x) id_z.  Exact block reshuffle, no F-moves needed."""
        src, dst = f.src + (z,), f.dst + (z,)
        src_basis = self.tree_basis(src)
        dst_basis = self.tree_basis(dst)
        blocks = {}
        for c, dst_trees in dst_basis.items():
            src_trees = src_basis.get(c)
            if not src_trees:
                continue
            blk = np.zeros((len(dst_trees), len(src_trees)), dtype=complex)
            row_groups: dict[int, list[int]] = {}
            for i, t in enumerate(dst_trees):
                row_groups.setdefault(root_of(f.dst, t[:-1]), []).append(i)
            col_groups: dict[int, list[int]] = {}
            for j, s in enumerate(src_trees):
                col_groups.setdefault(root_of(f.src, s[:-1]), []).append(j)
            filled = False
            for m, cols_m in col_groups.items():
                sub = f.blocks.get(m)
                rows_m = row_groups.get(m)
                if sub is None or rows_m is None or not sub.size:
                    continue
                blk[np.ix_(rows_m, cols_m)] = sub
                filled = True
            if filled:
                blocks[c] = blk
        return Mor(src, dst, blocks, self)

    def _zsplit_sizes(self, c: int, z: int, word: Word) -> list[tuple[int, int]]:
        """(m, multiplicity) pairs indexing Hom(c, (z,)+word) by the channel m
        of the tail word; ascending in m."""
        return [
            (m, len(self.trees(m, word)))
            for m in range(self.nlab)
            if self.N[z, m, c]
        ]

    def _zsplit_index(self, c: int, z: int, word: Word, m: int, sig: Tree) -> int:
        idx = 0
        for mm, sz in self._zsplit_sizes(c, z, word):
            if mm == m:
                return idx + self.trees(m, word).index(sig)
            idx += sz
        raise EngineError("z-split index lookup failed")

    def _unzip_matrix(self, c: int, z: int, word: Word) -> np.ndarray:
        """Change of basis on Hom(c, (z,)+word): columns are the z-split
        elements (id_z (x) sigma_m) . v[z,m->c] expanded in left trees."""
        key = (c, z, word)
        cached = self._unzip.get(key)
        if cached is not None:
            return cached
        full_word = (z,) + word
        dim = self.hom_dim(c, full_word)
        if len(word) == 0:
            mat = (
                np.eye(1, dtype=complex)
                if (dim == 1 and c == z)
                else np.zeros((dim, 0), dtype=complex)
            )
        elif len(word) == 1:
            mat = np.eye(dim, dtype=complex)
        else:
            prefix, xn = word[:-1], word[-1]
            pos = {t: i for i, t in enumerate(self.trees(c, full_word))}
            cols: list[np.ndarray] = []
            for m, _sz in self._zsplit_sizes(c, z, word):
                for sig in self.trees(m, word):
                    mu = root_of(prefix, sig[:-1])
                    colvec = np.zeros(dim, dtype=complex)
                    fdat = self.f_matrix(z, mu, xn, c)
                    if fdat is not None:
                        erows, fcols, _ = fdat
                        finv = self._fmat_inv[(z, mu, xn, c)]
                        jm = fcols.index(m)
                        for ie, e in enumerate(erows):
                            coeff = finv[jm, ie]
                            if coeff == 0:
                                continue
                            sub = self._unzip_matrix(e, z, prefix)
                            col_idx = self._zsplit_index(e, z, prefix, mu, sig[:-1])
                            subcol = sub[:, col_idx]
                            for it, t in enumerate(self.trees(e, (z,) + prefix)):
                                val = subcol[it]
                                if val != 0:
                                    colvec[pos[t + (c,)]] += coeff * val
                    cols.append(colvec)
            mat = (
                np.array(cols, dtype=complex).T
                if cols
                else np.zeros((dim, 0), dtype=complex)
            )
        self._unzip[key] = mat
        if mat.shape[0] == mat.shape[1] and mat.size:
            self._unzip_inv[key] = np.linalg.inv(mat)
        return mat

    def tensor_id_left(self, z: int, f: Mor) -> Mor:
        """id_z (x) f, conjugating the block-diagonal action by unzip moves."""
        src, dst = (z,) + f.src, (z,) + f.dst
        blocks = {}
        for c in self.tree_basis(dst):
            u_dst = self._unzip_matrix(c, z, f.dst)
            u_src = self._unzip_matrix(c, z, f.src)
            if u_dst.size == 0 or u_src.size == 0:
                continue
            row_sizes = self._zsplit_sizes(c, z, f.dst)
            col_sizes = self._zsplit_sizes(c, z, f.src)
            mid = np.zeros((u_dst.shape[1], u_src.shape[1]), dtype=complex)
            row_off = dict(_offsets(row_sizes))
            nonzero = False
            coff = 0
            for m, nc in col_sizes:
                sub = f.blocks.get(m)
                if sub is not None and sub.size and m in row_off:
                    nr = sub.shape[0]
                    mid[row_off[m] : row_off[m] + nr, coff : coff + nc] = sub
                    nonzero = True
                coff += nc
            if not nonzero:
                continue
            u_src_inv = self._unzip_inv.get((c, z, f.src))
            if u_src_inv is None:
                u_src_inv = np.linalg.pinv(u_src)
            blocks[c] = u_dst @ mid @ u_src_inv
        return Mor(src, dst, blocks, self)

    def tensor_id_right_word(self, f: Mor, word: Word) -> Mor:
        for z in word:
            f = self.tensor_id_right(f, z)
        return f

    def tensor_id_left_word(self, word: Word, f: Mor) -> Mor:
        for z in reversed(word):
            f = self.tensor_id_left(z, f)
        return f

    def tensor(self, f: Mor, g: Mor) -> Mor:
        """f (x) g = (f (x) id_{g.dst}) . (id_{f.src} (x) g)."""
        left = self.tensor_id_left_word(f.src, g)
        right = self.tensor_id_right_word(f, g.dst)
        return right @ left

    # ---------------------------------------------------------------- braids

    def braid(self, word: Word, k: int, sign: int = 1) -> Mor:
        """Braid leaves k and k+1 (1-based); sign +1 crosses the left strand
        over the right one, -1 is the inverse crossing."""
        key = (word, k, sign)
        cached = self._braid_cache.get(key)
        if cached is not None:
            return cached
        n = len(word)
        if not (1 <= k < n):
            raise EngineError("braid position out of range")
        a, b = word[k - 1], word[k]
        new_word = word[: k - 1] + (b, a) + word[k + 1 :]
        src_basis = self.tree_basis(word)
        dst_basis = self.tree_basis(new_word)
        blocks = {}
        for c, src_trees in src_basis.items():
            dst_trees = dst_basis.get(c)
            if not dst_trees:
                continue
            blk = np.zeros((len(dst_trees), len(src_trees)), dtype=complex)
            dst_pos = {t: i for i, t in enumerate(dst_trees)}
            for j, t in enumerate(src_trees):
                if k == 1:
                    e = t[1]
                    coeff = (
                        self.cat.r_symbol(a, b, e)
                        if sign > 0
                        else 1.0 / self.cat.r_symbol(b, a, e)
                    )
                    blk[dst_pos[(b,) + t[1:]], j] += coeff
                else:
                    mprev, mnext = t[k - 2], t[k]
                    fdat_ab = self.f_matrix(mprev, a, b, mnext)
                    fdat_ba = self.f_matrix(mprev, b, a, mnext)
                    if fdat_ab is None or fdat_ba is None:
                        continue
                    erows_ab, fcols, fmat = fdat_ab
                    erows_ba = fdat_ba[0]
                    finv = self._fmat_inv[(mprev, b, a, mnext)]
                    rvals = np.array(
                        [
                            self.cat.r_symbol(a, b, ff)
                            if sign > 0
                            else 1.0 / self.cat.r_symbol(b, a, ff)
                            for ff in fcols
                        ],
                        dtype=complex,
                    )
                    bmat = fmat @ np.diag(rvals) @ finv  # rows: old m; cols: new m'
                    i_old = erows_ab.index(t[k - 1])
                    for i_new, e in enumerate(erows_ba):
                        coeff = bmat[i_old, i_new]
                        if coeff == 0:
                            continue
                        blk[dst_pos[t[: k - 1] + (e,) + t[k:]], j] += coeff
            blocks[c] = blk
        mor = Mor(word, new_word, blocks, self)
        self._braid_cache[key] = mor
        return mor

    # ----------------------------------------------------------------- bends

    def coev(self, a: int, tilde: bool = False) -> Mor:
        """Cup.  Plain: () -> (a, dual a).  Tilde: () -> (dual a, a)."""
        ad = self.dual[a]
        if tilde:
            coeff = self._bend_ut[a] * self.sqrt_d[a]
            vert = self.vertex(ad, a, UNIT)
            return Mor((), (ad, a), {UNIT: coeff * vert.blocks[UNIT]}, self)
        coeff = self._bend_u[a] * self.sqrt_d[a]
        vert = self.vertex(a, ad, UNIT)
        return Mor((), (a, ad), {UNIT: coeff * vert.blocks[UNIT]}, self)

    def ev(self, a: int, tilde: bool = False) -> Mor:
        """Cap.  Plain: (dual a, a) -> ().  Tilde: (a, dual a) -> ()."""
        ad = self.dual[a]
        if tilde:
            coeff = self._bend_vt[a] * self.sqrt_d[a]
            vert = self.vertex(a, ad, UNIT)
            return Mor((a, ad), (), {UNIT: coeff * vert.blocks[UNIT].conj().T}, self)
        coeff = self._bend_v[a] * self.sqrt_d[a]
        vert = self.vertex(ad, a, UNIT)
        return Mor((ad, a), (), {UNIT: coeff * vert.blocks[UNIT].conj().T}, self)

    def coev_word(self, word: Word, tilde: bool = False) -> Mor:
        """Nested cup.  Plain: () -> word + dual_word(word), innermost bend on
        the last letter.  Tilde: () -> dual_word(word) + word, innermost bend
        on the first letter."""
        if not word:
            return self.identity(())
        head, rest = word[0], word[1:]
        if tilde:
            inner = self.coev(head, tilde=True)
            shell = self.tensor_id_left_word(
                self.dual_word(rest), self.tensor_id_right_word(inner, rest)
            )
            return shell @ self.coev_word(rest, tilde=True)
        inner = self.coev_word(rest)
        shell = self.tensor_id_left(head, self.tensor_id_right(inner, self.dual[head]))
        return shell @ self.coev(head)

    def ev_word(self, word: Word, tilde: bool = False) -> Mor:
        """Nested cap.  Plain: dual_word(word) + word -> (), innermost bend on
        the first letter.  Tilde: word + dual_word(word) -> (), innermost bend
        on the last letter."""
        if not word:
            return self.identity(())
        head, rest = word[0], word[1:]
        if tilde:
            inner = self.ev_word(rest, tilde=True)
            shell = self.tensor_id_left(head, self.tensor_id_right(inner, self.dual[head]))
            return self.ev(head, tilde=True) @ shell
        core = self.tensor_id_right_word(self.ev(head), rest)
        wrapped = self.tensor_id_left_word(self.dual_word(rest), core)
        return self.ev_word(rest) @ wrapped


def _offsets(sizes: list[tuple[int, int]]) -> Iterator[tuple[int, int]]:
    off = 0
    for m, sz in sizes:
        yield m, off
        off += sz
