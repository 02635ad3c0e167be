"""Hamiltonian and auxiliary-data containers.

The two-electron tensor g_pqrs (chemist convention, (pq|rs)) is kept in an
8-fold-symmetry packed layout: a flat array indexed by the composite pair
index of (pq) and (rs).  Every symmetry image of a stored entry reads back
the same float, so the permutational symmetries

    (pq|rs) = (qp|rs) = (pq|sr) = (qp|sr) = (rs|pq) = (sr|pq) = (rs|qp) = (sr|qp)

hold exactly by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

__all__ = [
    "MolecularHamiltonian",
    "AuxiliaryIntegrals",
    "ActiveSpaceSpec",
    "class_decomposition",
    "n_packed",
    "pair_index",
    "packed_index",
]

CLASS_NAMES = ("pppp", "pqqq", "pqpq", "ppqq", "pqrq", "pprs", "pqrs")


def pair_index(p, q):
    """Composite index of the unordered pair {p, q}; works on arrays."""
    hi = np.maximum(p, q)
    lo = np.minimum(p, q)
    return hi * (hi + 1) // 2 + lo


def packed_index(p, q, r, s):
    """Position of g_pqrs in the 8-fold packed layout; works on arrays."""
    a = pair_index(p, q)
    b = pair_index(r, s)
    return pair_index(a, b)


def n_packed(n_orbitals: int) -> int:
    """Length of the packed two-electron array for N orbitals."""
    m = n_orbitals * (n_orbitals + 1) // 2
    return m * (m + 1) // 2


# Cached 4-index gather maps (packed -> dense), keyed by N.  Read-only.
_UNPACK_CACHE: dict[int, np.ndarray] = {}


def _unpack_map(n: int) -> np.ndarray:
    idx = _UNPACK_CACHE.get(n)
    if idx is None:
        p, q, r, s = np.ogrid[0:n, 0:n, 0:n, 0:n]
        idx = packed_index(p, q, r, s)
        idx.setflags(write=False)
        _UNPACK_CACHE[n] = idx
    return idx


def _tri_rows(m: int):
    """(hi, lo) arrays for hi >= lo, ordered to match ``pair_index``."""
    hi = np.repeat(np.arange(m), np.arange(1, m + 1))
    lo = np.arange(hi.size) - hi * (hi + 1) // 2
    return hi, lo


_CANON_CACHE: dict[int, tuple] = {}


def _canonical_tuples(n: int):
    """Representative (p, q, r, s) arrays, one per packed slot."""
    reps = _CANON_CACHE.get(n)
    if reps is None:
        p_of, q_of = _tri_rows(n)
        a, b = _tri_rows(n * (n + 1) // 2)
        reps = (p_of[a], q_of[a], p_of[b], q_of[b])
        _CANON_CACHE[n] = reps
    return reps


def pack_two_body(dense: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Pack a dense N^4 tensor, verifying its 8-fold symmetry to ``tol``.

    The canonical representative (p>=q, r>=s, (pq)>=(rs)) wins; the check
    compares the input against the round-tripped tensor so every symmetry
    image is covered in one pass.
    """
    n = dense.shape[0]
    if dense.shape != (n, n, n, n):
        raise InputError(f"two-body tensor must be N^4, got {dense.shape}")
    packed = np.ascontiguousarray(dense[_canonical_tuples(n)])
    err = float(np.max(np.abs(dense - packed[_unpack_map(n)]))) if n else 0.0
    if not np.isfinite(dense).all():
        raise InputError("two-body tensor contains non-finite entries")
    if err > tol:
        raise InputError(
            f"two-body tensor violates permutational symmetry by {err:.3e} (tol {tol:.1e})"
        )
    return packed


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MolecularHamiltonian:
    """Spin-free electronic Hamiltonian: core constant, h_pq, packed g_pqrs.

    All energies in Hartree.  Instances are immutable; the arrays are
    flagged read-only so they can be shared freely.
    """

    n_orbitals: int
    core_constant: float
    one_body: np.ndarray
    two_body: np.ndarray  # packed, length n_packed(n_orbitals)
    n_electrons: int | None = None

    def __post_init__(self):
        n = self.n_orbitals
        h = _freeze(self.one_body)
        g = _freeze(self.two_body)
        if h.shape != (n, n):
            raise InputError(f"one-body tensor shape {h.shape}, expected ({n}, {n})")
        if g.shape != (n_packed(n),):
            raise InputError(
                f"packed two-body length {g.shape}, expected ({n_packed(n)},)"
            )
        if not (np.isfinite(h).all() and np.isfinite(g).all()):
            raise InputError("Hamiltonian contains non-finite entries")
        if not np.isfinite(self.core_constant):
            raise InputError("core constant is not finite")
        if n and np.max(np.abs(h - h.T)) > 1e-12:
            raise InputError("one-body tensor is not symmetric to 1e-12")
        object.__setattr__(self, "one_body", h)
        object.__setattr__(self, "two_body", g)
        object.__setattr__(self, "core_constant", float(self.core_constant))

    @classmethod
    def from_dense(cls, core_constant, one_body, two_body_dense,
                   n_electrons=None, sym_tol: float = 1e-8):
        """Build from a dense N^4 two-body tensor (symmetry-checked)."""
        one_body = np.asarray(one_body, dtype=float)
        n = one_body.shape[0]
        return cls(
            n_orbitals=n,
            core_constant=float(core_constant),
            one_body=one_body,
            two_body=pack_two_body(np.asarray(two_body_dense, dtype=float), sym_tol),
            n_electrons=n_electrons,
        )

    def g(self, p: int, q: int, r: int, s: int) -> float:
        """Dense accessor g_pqrs resolving the packed symmetry."""
        return float(self.two_body[packed_index(p, q, r, s)])

    def two_body_dense(self) -> np.ndarray:
        """Unpack to the full N^4 tensor (symmetric exactly, by gather)."""
        return self.two_body[_unpack_map(self.n_orbitals)]

    def replace(self, **kw) -> "MolecularHamiltonian":
        fields = dict(
            n_orbitals=self.n_orbitals,
            core_constant=self.core_constant,
            one_body=self.one_body,
            two_body=self.two_body,
            n_electrons=self.n_electrons,
        )
        fields.update(kw)
        return MolecularHamiltonian(**fields)

    def allclose(self, other: "MolecularHamiltonian", tol: float = 0.0) -> bool:
        return (
            self.n_orbitals == other.n_orbitals
            and abs(self.core_constant - other.core_constant) <= tol
            and np.max(np.abs(self.one_body - other.one_body), initial=0.0) <= tol
            and np.max(np.abs(self.two_body - other.two_body), initial=0.0) <= tol
        )


@dataclass(frozen=True)
class AuxiliaryIntegrals:
    """AO-basis data consumed by the localization schemes.

    Every field is optional; each scheme validates what it needs.  S must
    be positive definite, and C^T S C = I is enforced when both the
    overlap and the MO coefficients are present.
    """

    ao_overlap: np.ndarray | None = None
    mo_coefficients: np.ndarray | None = None
    ao_to_atom: tuple[int, ...] | None = None
    atomic_numbers: tuple[float, ...] | None = None
    dipole_ao: np.ndarray | None = None  # stacked (3, M, M)

    def __post_init__(self):
        s = self.ao_overlap
        if s is not None:
            s = _freeze(s)
            if s.ndim != 2 or s.shape[0] != s.shape[1]:
                raise InputError("overlap matrix must be square")
            if np.max(np.abs(s - s.T), initial=0.0) > 1e-10:
                raise InputError("overlap matrix is not symmetric")
            if np.linalg.eigvalsh(s).min() <= 1e-10:
                raise InputError("overlap not positive definite")
            object.__setattr__(self, "ao_overlap", s)
        c = self.mo_coefficients
        if c is not None:
            c = _freeze(c)
            if c.ndim != 2:
                raise InputError("MO coefficient matrix must be 2-D")
            object.__setattr__(self, "mo_coefficients", c)
        if self.dipole_ao is not None:
            d = _freeze(self.dipole_ao)
            if d.ndim != 3 or d.shape[0] != 3 or d.shape[1] != d.shape[2]:
                raise InputError("dipole integrals must be stacked (3, M, M)")
            for k in range(3):
                if np.max(np.abs(d[k] - d[k].T), initial=0.0) > 1e-10:
                    raise InputError("dipole matrices must be symmetric")
            object.__setattr__(self, "dipole_ao", d)
        if self.ao_to_atom is not None:
            object.__setattr__(self, "ao_to_atom", tuple(int(a) for a in self.ao_to_atom))
        if self.atomic_numbers is not None:
            object.__setattr__(
                self, "atomic_numbers", tuple(float(z) for z in self.atomic_numbers)
            )
        self._check_dimensions()

    def _check_dimensions(self):
        m = None

        def check(name, value):
            nonlocal m
            if value is None:
                return
            if m is None:
                m = value
            elif value != m:
                raise InputError(f"{name} implies {value} AOs, other sections imply {m}")

        if self.ao_overlap is not None:
            check("OVERLAP", self.ao_overlap.shape[0])
        if self.mo_coefficients is not None:
            check("MO_COEFF", self.mo_coefficients.shape[0])
        if self.dipole_ao is not None:
            check("DIPOLE", self.dipole_ao.shape[1])
        if self.ao_to_atom is not None:
            check("AO_ATOM_MAP", len(self.ao_to_atom))
            if self.atomic_numbers is not None:
                n_atoms = len(self.atomic_numbers)
                if self.ao_to_atom and max(self.ao_to_atom) >= n_atoms:
                    raise InputError(
                        f"AO_ATOM_MAP references atom {max(self.ao_to_atom)} but only "
                        f"{n_atoms} atomic numbers are given"
                    )
            if any(a < 0 for a in self.ao_to_atom):
                raise InputError("AO_ATOM_MAP entries must be non-negative")
        if (
            self.ao_overlap is not None
            and self.mo_coefficients is not None
        ):
            s, c = self.ao_overlap, self.mo_coefficients
            gram = c.T @ s @ c
            err = np.max(np.abs(gram - np.eye(c.shape[1])))
            if err > 1e-8:
                raise InputError(f"MO coefficients not S-orthonormal (deviation {err:.2e})")

    @property
    def n_ao(self) -> int | None:
        for value in (self.ao_overlap, self.mo_coefficients):
            if value is not None:
                return value.shape[0]
        if self.dipole_ao is not None:
            return self.dipole_ao.shape[1]
        if self.ao_to_atom is not None:
            return len(self.ao_to_atom)
        return None


@dataclass(frozen=True)
class ActiveSpaceSpec:
    """Frozen / active / virtual partition of the spatial orbitals."""

    frozen: tuple[int, ...]
    active: tuple[int, ...]
    virtual: tuple[int, ...] = field(default_factory=tuple)
    n_active_electrons: int = 0

    def __post_init__(self):
        object.__setattr__(self, "frozen", tuple(int(i) for i in self.frozen))
        object.__setattr__(self, "active", tuple(int(i) for i in self.active))
        object.__setattr__(self, "virtual", tuple(int(i) for i in self.virtual))

    @classmethod
    def around_fermi(cls, n_orbitals, n_electrons, n_active_orbitals,
                     n_active_electrons):
        """Window of ``n_active_orbitals`` around the highest occupied level.

        Assumes energy-ordered orbitals: the lowest
        (n_electrons - n_active_electrons) / 2 doubly occupied orbitals are
        frozen, the next ``n_active_orbitals`` form the active space, and
        the highest virtuals are deleted.  Degenerate levels are split by
        index order.
        """
        n_frozen_elec = n_electrons - n_active_electrons
        if n_frozen_elec < 0 or n_frozen_elec % 2:
            raise InputError(
                f"cannot freeze {n_frozen_elec} electrons; the frozen count "
                "must be even and non-negative"
            )
        n_frozen = n_frozen_elec // 2
        if n_frozen + n_active_orbitals > n_orbitals:
            raise InputError(
                f"{n_frozen} frozen + {n_active_orbitals} active orbitals "
                f"exceed the {n_orbitals} available"
            )
        frozen = tuple(range(n_frozen))
        active = tuple(range(n_frozen, n_frozen + n_active_orbitals))
        virtual = tuple(range(n_frozen + n_active_orbitals, n_orbitals))
        spec = cls(frozen=frozen, active=active, virtual=virtual,
                   n_active_electrons=n_active_electrons)
        spec.validate(n_orbitals)
        return spec

    def validate(self, n_orbitals: int):
        union = sorted(self.frozen + self.active + self.virtual)
        if union != list(range(n_orbitals)):
            raise InputError(
                "frozen/active/virtual lists must partition the orbital range "
                f"0..{n_orbitals - 1} without overlap"
            )
        if self.n_active_electrons % 2 != 0:
            raise InputError("active electron count must be even (closed-shell)")
        if self.n_active_electrons > 2 * len(self.active):
            raise InputError("more active electrons than active spin orbitals")
        if self.n_active_electrons < 0:
            raise InputError("negative active electron count")


def class_decomposition(ham: MolecularHamiltonian) -> dict[str, float]:
    """Split sum(|g_pqrs|) over the full tensor into seven index classes.

    Classes by coincidence pattern of (p, q, r, s), counting every
    symmetry image (so e.g. pqrq collects 4|g_pqrq| per distinct p,q,r):

      pppp  all four equal
      pqqq  three equal, one different
      pqpq  two pairs straddling the bra/ket split  (exchange-type)
      ppqq  two pairs inside bra and ket            (Coulomb-type)
      pqrq  one repeated index straddling the split, two singletons
      pprs  one repeated index inside bra or ket, two singletons
      pqrs  all four distinct

    The seven sums add up to the unrestricted sum over all N^4 entries.
    """
    n = ham.n_orbitals
    g = np.abs(ham.two_body_dense())
    p, q, r, s = np.ogrid[0:n, 0:n, 0:n, 0:n]
    pq, rs = p == q, r == s
    pr, ps = p == r, p == s
    qr, qs = q == r, q == s

    all_equal = pq & pr & ps
    n_pairs_eq = (
        pq.astype(int) + pr.astype(int) + ps.astype(int)
        + qr.astype(int) + qs.astype(int) + rs.astype(int)
    )
    masks = {
        "pppp": all_equal,
        # exactly one triple: three indices equal, 3 coincident pairs
        "pqqq": (n_pairs_eq == 3) & ~all_equal,
        "pqpq": (pr & qs) | (ps & qr),
        "ppqq": pq & rs & ~all_equal,
        # one straddling repeat, other two indices distinct from everything
        "pqrq": (n_pairs_eq == 1) & (pr | ps | qr | qs),
        "pprs": (n_pairs_eq == 1) & (pq | rs),
        "pqrs": n_pairs_eq == 0,
    }
    masks["pqpq"] &= ~all_equal
    out = {}
    total_mask = np.zeros(g.shape, dtype=int)
    for name in CLASS_NAMES:
        m = np.broadcast_to(masks[name], g.shape)
        total_mask += m
        out[name] = float(np.sum(g[m], dtype=np.longdouble))
    # every tuple must fall in exactly one class
    assert (total_mask == 1).all()
    return out
