#!/usr/bin/env python3
"""Generate the FCIDUMP / auxiliary fixtures used by the data-conditional tests.

Self-contained restricted Hartree-Fock on s/p Gaussian bases
(McMurchie-Davidson integrals), independent of the onenorm package so the
fixtures act as an external cross-check of its parsers and norms.

Produces, under fixtures/ by default:
  h2_ccpvdz_cmo.fcidump      H2, cc-pVDZ, canonical RHF orbitals (10 MOs)
  h2_ccpvdz_aux.txt          AO overlap, MO coefficients, dipoles, atom map
  hchain_{n:02d}_sto3g_cmo.fcidump   linear H_n chains, n = 2,4,6,8,10,
                             1.4 Angstrom spacing, STO-3G, RHF orbitals

Run:  python scripts/generate_fixtures.py [--out fixtures]
"""

from __future__ import annotations

import argparse
import math
import os

import numpy as np
from scipy.special import hyp1f1

ANGSTROM_TO_BOHR = 1.8897259886

# exponents / contraction coefficients (coefficients apply to normalized
# primitives; contracted functions are renormalized below)
BASIS = {
    "sto-3g": {
        "H": [
            ("s", [(3.42525091, 0.15432897), (0.62391373, 0.53532814), (0.16885540, 0.44463454)]),
        ]
    },
    "cc-pvdz": {
        "H": [
            ("s", [(13.0100000, 0.0196850), (1.9620000, 0.1379770),
                   (0.4446000, 0.4781480), (0.1220000, 0.5012400)]),
            ("s", [(0.1220000, 1.0)]),
            ("p", [(0.7270000, 1.0)]),
        ]
    },
}

CARTESIAN = {"s": [(0, 0, 0)], "p": [(1, 0, 0), (0, 1, 0), (0, 0, 1)]}


def double_factorial(n: int) -> float:
    return 1.0 if n <= 0 else n * double_factorial(n - 2)


def primitive_norm(lmn, alpha) -> float:
    l, m, n = lmn
    total = l + m + n
    return (
        (2.0 * alpha / math.pi) ** 0.75
        * (4.0 * alpha) ** (total / 2.0)
        / math.sqrt(
            double_factorial(2 * l - 1)
            * double_factorial(2 * m - 1)
            * double_factorial(2 * n - 1)
        )
    )


class BasisFunction:
    def __init__(self, center, lmn, primitives, atom_index):
        self.center = np.asarray(center, dtype=float)
        self.lmn = tuple(lmn)
        self.atom_index = atom_index
        self.alphas = np.array([a for a, _ in primitives])
        coeffs = np.array([c * primitive_norm(lmn, a) for a, c in primitives])
        self.coeffs = coeffs
        self._normalize()

    def _normalize(self):
        self_overlap = 0.0
        for a, ca in zip(self.alphas, self.coeffs):
            for b, cb in zip(self.alphas, self.coeffs):
                self_overlap += ca * cb * _overlap_prim(
                    a, self.lmn, self.center, b, self.lmn, self.center
                )
        self.coeffs = self.coeffs / math.sqrt(self_overlap)


def hermite_e(i, j, t, qx, a, b):
    """Hermite expansion coefficient E_t^{ij} for one dimension."""
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-mu * qx * qx)
    if j == 0:
        return (
            hermite_e(i - 1, j, t - 1, qx, a, b) / (2.0 * p)
            - (mu * qx / a) * hermite_e(i - 1, j, t, qx, a, b)
            + (t + 1) * hermite_e(i - 1, j, t + 1, qx, a, b)
        )
    return (
        hermite_e(i, j - 1, t - 1, qx, a, b) / (2.0 * p)
        + (mu * qx / b) * hermite_e(i, j - 1, t, qx, a, b)
        + (t + 1) * hermite_e(i, j - 1, t + 1, qx, a, b)
    )


def _overlap_prim(a, lmn1, ra, b, lmn2, rb):
    p = a + b
    pref = (math.pi / p) ** 1.5
    value = pref
    for axis in range(3):
        value *= hermite_e(lmn1[axis], lmn2[axis], 0, ra[axis] - rb[axis], a, b)
    return value


def _kinetic_prim(a, lmn1, ra, b, lmn2, rb):
    l2, m2, n2 = lmn2

    def ovlp(shift_axis, delta):
        lmn = list(lmn2)
        lmn[shift_axis] += delta
        if lmn[shift_axis] < 0:
            return 0.0
        return _overlap_prim(a, lmn1, ra, b, tuple(lmn), rb)

    base = _overlap_prim(a, lmn1, ra, b, lmn2, rb)
    term0 = b * (2 * (l2 + m2 + n2) + 3) * base
    term1 = -2.0 * b * b * (ovlp(0, 2) + ovlp(1, 2) + ovlp(2, 2))
    term2 = -0.5 * (
        l2 * (l2 - 1) * ovlp(0, -2)
        + m2 * (m2 - 1) * ovlp(1, -2)
        + n2 * (n2 - 1) * ovlp(2, -2)
    )
    return term0 + term1 + term2


def boys(n, t):
    return hyp1f1(n + 0.5, n + 1.5, -t) / (2.0 * n + 1.0)


def hermite_r(t, u, v, n, p, pc):
    """Auxiliary Hermite integrals R^n_{tuv} by downward recursion."""
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys(n, p * (pc @ pc))
    if t == u == 0:
        value = 0.0
        if v > 1:
            value += (v - 1) * hermite_r(t, u, v - 2, n + 1, p, pc)
        return value + pc[2] * hermite_r(t, u, v - 1, n + 1, p, pc)
    if t == 0:
        value = 0.0
        if u > 1:
            value += (u - 1) * hermite_r(t, u - 2, v, n + 1, p, pc)
        return value + pc[1] * hermite_r(t, u - 1, v, n + 1, p, pc)
    value = 0.0
    if t > 1:
        value += (t - 1) * hermite_r(t - 2, u, v, n + 1, p, pc)
    return value + pc[0] * hermite_r(t - 1, u, v, n + 1, p, pc)


def _nuclear_prim(a, lmn1, ra, b, lmn2, rb, centers, charges):
    p = a + b
    cap = np.array([(aa * ra[ax] + b * rb[ax]) / p for ax, aa in ((0, a), (1, a), (2, a))])
    e_by_axis = [
        [hermite_e(lmn1[ax], lmn2[ax], t, ra[ax] - rb[ax], a, b)
         for t in range(lmn1[ax] + lmn2[ax] + 1)]
        for ax in range(3)
    ]
    total = 0.0
    for center, charge in zip(centers, charges):
        pc = cap - center
        acc = 0.0
        for t, et in enumerate(e_by_axis[0]):
            for u, eu in enumerate(e_by_axis[1]):
                for v, ev in enumerate(e_by_axis[2]):
                    acc += et * eu * ev * hermite_r(t, u, v, 0, p, pc)
        total -= charge * acc
    return total * 2.0 * math.pi / p


def _dipole_prim(a, lmn1, ra, b, lmn2, rb, axis):
    p = a + b
    cap = (a * ra + b * rb) / p
    value = (math.pi / p) ** 1.5
    for ax in range(3):
        e0 = hermite_e(lmn1[ax], lmn2[ax], 0, ra[ax] - rb[ax], a, b)
        if ax == axis:
            e1 = hermite_e(lmn1[ax], lmn2[ax], 1, ra[ax] - rb[ax], a, b)
            value *= e1 + cap[ax] * e0
        else:
            value *= e0
    return value


def _eri_prim(a, lmn1, ra, b, lmn2, rb, c, lmn3, rc, d, lmn4, rd):
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    cap_p = (a * ra + b * rb) / p
    cap_q = (c * rc + d * rd) / q
    pq = cap_p - cap_q

    e_bra = [
        [hermite_e(lmn1[ax], lmn2[ax], t, ra[ax] - rb[ax], a, b)
         for t in range(lmn1[ax] + lmn2[ax] + 1)]
        for ax in range(3)
    ]
    e_ket = [
        [hermite_e(lmn3[ax], lmn4[ax], t, rc[ax] - rd[ax], c, d)
         for t in range(lmn3[ax] + lmn4[ax] + 1)]
        for ax in range(3)
    ]
    total = 0.0
    for t, et in enumerate(e_bra[0]):
        if et == 0.0:
            continue
        for u, eu in enumerate(e_bra[1]):
            if eu == 0.0:
                continue
            for v, ev in enumerate(e_bra[2]):
                if ev == 0.0:
                    continue
                bra = et * eu * ev
                for tau, ft in enumerate(e_ket[0]):
                    if ft == 0.0:
                        continue
                    for nu, fu in enumerate(e_ket[1]):
                        if fu == 0.0:
                            continue
                        for phi, fv in enumerate(e_ket[2]):
                            if fv == 0.0:
                                continue
                            sign = -1.0 if (tau + nu + phi) % 2 else 1.0
                            total += (
                                bra * ft * fu * fv * sign
                                * hermite_r(t + tau, u + nu, v + phi, 0, alpha, pq)
                            )
    return total * 2.0 * math.pi**2.5 / (p * q * math.sqrt(p + q))


def _contracted(prim_fn, fa: BasisFunction, fb: BasisFunction, *extra):
    total = 0.0
    for a, ca in zip(fa.alphas, fa.coeffs):
        for b, cb in zip(fb.alphas, fb.coeffs):
            total += ca * cb * prim_fn(a, fa.lmn, fa.center, b, fb.lmn, fb.center, *extra)
    return total


def _contracted_eri(fa, fb, fc, fd):
    total = 0.0
    for a, ca in zip(fa.alphas, fa.coeffs):
        for b, cb in zip(fb.alphas, fb.coeffs):
            for c, cc in zip(fc.alphas, fc.coeffs):
                for d, cd in zip(fd.alphas, fd.coeffs):
                    total += ca * cb * cc * cd * _eri_prim(
                        a, fa.lmn, fa.center,
                        b, fb.lmn, fb.center,
                        c, fc.lmn, fc.center,
                        d, fd.lmn, fd.center,
                    )
    return total


class Molecule:
    def __init__(self, symbols, coords_angstrom, basis_name):
        self.symbols = list(symbols)
        self.coords = np.asarray(coords_angstrom, dtype=float) * ANGSTROM_TO_BOHR
        self.charges = np.array([{"H": 1.0}[s] for s in self.symbols])
        self.basis = []
        for atom_index, (symbol, center) in enumerate(zip(self.symbols, self.coords)):
            for shell, prims in BASIS[basis_name][symbol]:
                for lmn in CARTESIAN[shell]:
                    self.basis.append(BasisFunction(center, lmn, prims, atom_index))
        self.n_electrons = int(self.charges.sum())

    def nuclear_repulsion(self) -> float:
        energy = 0.0
        for i in range(len(self.charges)):
            for j in range(i):
                energy += self.charges[i] * self.charges[j] / np.linalg.norm(
                    self.coords[i] - self.coords[j]
                )
        return energy

    def integrals(self):
        n = len(self.basis)
        s = np.zeros((n, n))
        t = np.zeros((n, n))
        v = np.zeros((n, n))
        dip = np.zeros((3, n, n))
        for i in range(n):
            for j in range(i + 1):
                fa, fb = self.basis[i], self.basis[j]
                s[i, j] = s[j, i] = _contracted(_overlap_prim, fa, fb)
                t[i, j] = t[j, i] = _contracted(_kinetic_prim, fa, fb)
                v[i, j] = v[j, i] = _contracted(
                    _nuclear_prim, fa, fb, self.coords, self.charges
                )
                for ax in range(3):
                    dip[ax, i, j] = dip[ax, j, i] = _contracted(_dipole_prim, fa, fb, ax)
        eri = np.zeros((n, n, n, n))
        for i in range(n):
            for j in range(i + 1):
                ij = i * (i + 1) // 2 + j
                for k in range(i + 1):
                    for l in range(k + 1):
                        if k * (k + 1) // 2 + l > ij:
                            continue
                        value = _contracted_eri(
                            self.basis[i], self.basis[j], self.basis[k], self.basis[l]
                        )
                        for a, b in ((i, j), (j, i)):
                            for c, d in ((k, l), (l, k)):
                                eri[a, b, c, d] = value
                                eri[c, d, a, b] = value
        return s, t, v, dip, eri


def _symmetry_pure_orbitals(fock, s, tol=1e-9):
    """Diagonalize per exact-coupling AO block; fixes degenerate gauges.

    AO index sets that never couple through F or S (symmetry blocks, e.g.
    sigma / pi_x / pi_y in a linear molecule) are diagonalized separately,
    so degenerate orbitals never mix across blocks and the canonical
    orbitals are reproducible.  Signs are fixed by making the largest
    coefficient of each orbital positive.
    """
    n = s.shape[0]
    coupled = (np.abs(fock) > tol) | (np.abs(s) > tol)
    assigned = np.full(n, -1)
    blocks = []
    for start in range(n):
        if assigned[start] >= 0:
            continue
        stack, members = [start], []
        while stack:
            k = stack.pop()
            if assigned[k] >= 0:
                continue
            assigned[k] = len(blocks)
            members.append(k)
            stack.extend(int(x) for x in np.flatnonzero(coupled[k]) if assigned[x] < 0)
        blocks.append(sorted(members))
    energies = np.empty(n)
    coeff = np.zeros((n, n))
    col = 0
    for members in blocks:
        idx = np.ix_(members, members)
        ev, evec = np.linalg.eigh(s[idx])
        x = evec @ np.diag(ev**-0.5) @ evec.T
        e_blk, c_blk = np.linalg.eigh(x @ fock[idx] @ x)
        c_blk = x @ c_blk
        for k in range(len(members)):
            energies[col] = e_blk[k]
            coeff[np.array(members), col] = c_blk[:, k]
            col += 1
    order = np.argsort(energies, kind="stable")
    coeff = coeff[:, order]
    for p in range(n):
        pivot = np.argmax(np.abs(coeff[:, p]))
        if coeff[pivot, p] < 0:
            coeff[:, p] = -coeff[:, p]
    return energies[order], coeff


def restricted_hartree_fock(mol: Molecule, max_cycles=200, conv=1e-11):
    s, t, v, dip, eri = mol.integrals()
    hcore = t + v
    n_occ = mol.n_electrons // 2
    assert mol.n_electrons % 2 == 0, "restricted method needs an even electron count"

    evals, evecs = np.linalg.eigh(s)
    x = evecs @ np.diag(evals**-0.5) @ evecs.T

    def diagonalize(fock):
        f_ortho = x @ fock @ x
        energies, c_ortho = np.linalg.eigh(f_ortho)
        return energies, x @ c_ortho

    _, c = diagonalize(hcore)
    density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
    energy = 0.0
    diis_f, diis_e = [], []
    for cycle in range(max_cycles):
        j = np.einsum("uvls,ls->uv", eri, density)
        k = np.einsum("ulvs,ls->uv", eri, density)
        fock = hcore + j - 0.5 * k

        error = fock @ density @ s - s @ density @ fock
        diis_f.append(fock)
        diis_e.append(x @ error @ x)
        if len(diis_f) > 8:
            diis_f.pop(0)
            diis_e.pop(0)
        if len(diis_f) > 1:
            m = len(diis_f)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for a in range(m):
                for bb in range(m):
                    b[a, bb] = np.sum(diis_e[a] * diis_e[bb])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:m]
                fock = sum(w * f for w, f in zip(weights, diis_f))
            except np.linalg.LinAlgError:
                pass

        orbital_energies, c = diagonalize(fock)
        density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        new_energy = 0.5 * np.sum(density * (hcore + hcore + j - 0.5 * k))
        if abs(new_energy - energy) < conv and cycle > 1:
            energy = new_energy
            break
        energy = new_energy
    j = np.einsum("uvls,ls->uv", eri, density)
    k = np.einsum("ulvs,ls->uv", eri, density)
    orbital_energies, c = _symmetry_pure_orbitals(hcore + j - 0.5 * k, s)
    density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
    total = energy + mol.nuclear_repulsion()
    return {
        "overlap": s,
        "hcore": hcore,
        "dipole": dip,
        "eri": eri,
        "mo_coeff": c,
        "mo_energy": orbital_energies,
        "e_electronic": energy,
        "e_total": total,
        "n_occ": n_occ,
    }


def restricted_open_hartree_fock(mol: Molecule, max_cycles=400, conv=1e-11):
    """High-spin ROHF (Guest-Saunders effective Fock) for odd chains."""
    s, t, v, dip, eri = mol.integrals()
    hcore = t + v
    n_alpha = (mol.n_electrons + 1) // 2
    n_beta = mol.n_electrons // 2

    evals, evecs = np.linalg.eigh(s)
    x = evecs @ np.diag(evals**-0.5) @ evecs.T
    _, c = np.linalg.eigh(x @ hcore @ x)
    c = x @ c
    energy = 0.0
    diis_f, diis_e = [], []
    for cycle in range(max_cycles):
        pa = c[:, :n_alpha] @ c[:, :n_alpha].T
        pb = c[:, :n_beta] @ c[:, :n_beta].T
        j_tot = np.einsum("uvls,ls->uv", eri, pa + pb)
        fa = hcore + j_tot - np.einsum("ulvs,ls->uv", eri, pa)
        fb = hcore + j_tot - np.einsum("ulvs,ls->uv", eri, pb)
        new_energy = 0.5 * (np.sum(pa * (hcore + fa)) + np.sum(pb * (hcore + fb)))

        # effective Fock in the current MO basis, Guest-Saunders weights
        fa_mo = c.T @ fa @ c
        fb_mo = c.T @ fb @ c
        avg = 0.5 * (fa_mo + fb_mo)
        n = s.shape[0]
        closed = slice(0, n_beta)
        open_ = slice(n_beta, n_alpha)
        virt = slice(n_alpha, n)
        f_eff = avg.copy()
        f_eff[closed, open_] = fb_mo[closed, open_]
        f_eff[open_, closed] = fb_mo[open_, closed]
        f_eff[open_, virt] = fa_mo[open_, virt]
        f_eff[virt, open_] = fa_mo[virt, open_]
        # back to AO metric: F_ao such that C^T F_ao C = f_eff
        f_ao = s @ c @ f_eff @ c.T @ s

        error = x @ (f_ao @ (pa + pb) @ s - s @ (pa + pb) @ f_ao) @ x
        diis_f.append(f_ao)
        diis_e.append(error)
        if len(diis_f) > 8:
            diis_f.pop(0)
            diis_e.pop(0)
        f_use = f_ao
        if len(diis_f) > 1:
            m = len(diis_f)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for aa in range(m):
                for bb in range(m):
                    b[aa, bb] = np.sum(diis_e[aa] * diis_e[bb])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:m]
                f_use = sum(w * f for w, f in zip(weights, diis_f))
            except np.linalg.LinAlgError:
                pass
        _, c = np.linalg.eigh(x @ f_use @ x)
        c = x @ c
        if abs(new_energy - energy) < conv and cycle > 2:
            energy = new_energy
            break
        energy = new_energy
    # canonical, symmetry-pure orbitals of the converged effective Fock
    _, c = _symmetry_pure_orbitals(f_use, s)
    return {
        "overlap": s,
        "hcore": hcore,
        "dipole": dip,
        "eri": eri,
        "mo_coeff": c,
        "e_electronic": energy,
        "e_total": energy + mol.nuclear_repulsion(),
        "n_occ": n_alpha,
    }


def transform_to_mo(scf):
    c = scf["mo_coeff"]
    h_mo = c.T @ scf["hcore"] @ c
    g = np.einsum("abcd,ap->pbcd", scf["eri"], c, optimize=True)
    g = np.einsum("pbcd,bq->pqcd", g, c, optimize=True)
    g = np.einsum("pqcd,cr->pqrd", g, c, optimize=True)
    g = np.einsum("pqrd,ds->pqrs", g, c, optimize=True)
    return h_mo, g


def write_fcidump(path, h, g, core, n_electrons, threshold=1e-12):
    n = h.shape[0]
    lines = [
        f" &FCI NORB={n},NELEC={n_electrons},MS2=0,",
        "  ORBSYM=" + "1," * n,
        "  ISYM=1,",
        " &END",
    ]
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(i + 1):
                for l in range(k + 1):
                    if k * (k + 1) // 2 + l > ij:
                        continue
                    if abs(g[i, j, k, l]) > threshold:
                        lines.append(f"{float(g[i, j, k, l])!r} {i + 1} {j + 1} {k + 1} {l + 1}")
    for i in range(n):
        for j in range(i + 1):
            if abs(h[i, j]) > threshold:
                lines.append(f"{float(h[i, j])!r} {i + 1} {j + 1} 0 0")
    lines.append(f"{float(core)!r} 0 0 0 0")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def write_matrix_section(handle, name, matrix):
    matrix = np.atleast_2d(matrix)
    handle.write(f"#SECTION {name} {matrix.shape[0]} {matrix.shape[1]}\n")
    for row in matrix:
        handle.write(" ".join(repr(float(x)) for x in row) + "\n")


def write_aux(path, mol, scf):
    with open(path, "w", encoding="utf-8") as handle:
        write_matrix_section(handle, "OVERLAP", scf["overlap"])
        write_matrix_section(handle, "MO_COEFF", scf["mo_coeff"])
        for ax, name in enumerate(("DIPOLE_X", "DIPOLE_Y", "DIPOLE_Z")):
            write_matrix_section(handle, name, scf["dipole"][ax])
        write_matrix_section(
            handle, "AO_ATOM_MAP",
            np.array([[float(f.atom_index) for f in mol.basis]]),
        )
        write_matrix_section(handle, "ATOMIC_NUMBERS", np.array([mol.charges]))


def h2_fixture(out_dir, bond=0.741):
    mol = Molecule(["H", "H"], [[0, 0, -bond / 2], [0, 0, bond / 2]], "cc-pvdz")
    scf = restricted_hartree_fock(mol)
    print(f"H2/cc-pVDZ  r={bond:.4f} A  E(RHF) = {scf['e_total']:.8f} Ha")
    h_mo, g_mo = transform_to_mo(scf)
    write_fcidump(
        os.path.join(out_dir, "h2_ccpvdz_cmo.fcidump"),
        h_mo, g_mo, mol.nuclear_repulsion(), mol.n_electrons,
    )
    write_aux(os.path.join(out_dir, "h2_ccpvdz_aux.txt"), mol, scf)
    return scf


def chain_fixture(out_dir, n_atoms, spacing=1.4):
    coords = [[0.0, 0.0, k * spacing] for k in range(n_atoms)]
    center = np.mean(coords, axis=0)
    coords = [list(np.array(c) - center) for c in coords]
    mol = Molecule(["H"] * n_atoms, coords, "sto-3g")
    if n_atoms % 2 == 0:
        scf = restricted_hartree_fock(mol)
        print(f"H{n_atoms}/STO-3G  E(RHF) = {scf['e_total']:.8f} Ha")
    else:
        scf = restricted_open_hartree_fock(mol)
        print(f"H{n_atoms}/STO-3G  E(ROHF) = {scf['e_total']:.8f} Ha")
    h_mo, g_mo = transform_to_mo(scf)
    write_fcidump(
        os.path.join(out_dir, f"hchain_{n_atoms:02d}_sto3g_cmo.fcidump"),
        h_mo, g_mo, mol.nuclear_repulsion(), mol.n_electrons,
    )
    write_aux(os.path.join(out_dir, f"hchain_{n_atoms:02d}_sto3g_aux.txt"), mol, scf)
    return scf


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="fixtures")
    parser.add_argument("--h2-bond", type=float, default=0.741,
                        help="H2 bond length in Angstrom")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    h2_fixture(args.out, bond=args.h2_bond)
    # all chains 2..10, then even chains out to 20 so the log-log fits
    # sample the asymptotic regime as well as the onset
    for n_atoms in list(range(2, 11)) + [12, 14, 16, 18, 20]:
        chain_fixture(args.out, n_atoms)
    print(f"fixtures written to {args.out}/")


if __name__ == "__main__":
    main()
