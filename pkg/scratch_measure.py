"""Scratch measurements: timings and tolerance-risk probes (not shipped)."""
import time

import numpy as np

import etaqm as q
from etaqm import operators as ops
from etaqm import models, eigen, inner, evolve, expr

def t(label, fn):
    t0 = time.time()
    out = fn()
    print(f"[{time.time()-t0:8.2f}s] {label}")
    return out

# --- 1. eigensolver timings ---
g800 = q.make_grid(16.0, 800)
g1600 = q.make_grid(16.0, 1600)
pot = q.scarf2_potential(2.0, 1.0)
H800 = q.build_hamiltonian(g800, pot)
H1600 = q.build_hamiltonian(g1600, pot)
r800 = t("eigvals N=800", lambda: eigen.eig(H800))
r1600 = t("eigvals N=1600", lambda: eigen.eig(H1600))
bound = eigen.converged_bound_states(r800.eigenvalues, r1600.eigenvalues)
print("bound:", bound.values, "movement:", bound.movement)
print("vs {-4,-1,-0.25}: devs:",
      [min(abs(bound.values - e)) for e in (-4.0, -1.0, -0.25)])

# --- 2. intertwining residuals, N scaling ---
nu = expr.parse("tanh(x)")
gauge = q.GaugeSpec(0.5, nu)
for N in (800, 1600, 3200):
    gg = q.make_grid(16.0, N)
    probes = ops.gaussian_probes(gg)
    Hp = q.build_hamiltonian(gg, q.SpecialB1(2.0))
    P = q.build_eta(gg, q.ParityEta())
    rp = ops.intertwining_residual(P, Hp, probes)
    Hf = q.build_hamiltonian(gg, q.FirstOrderFamily(2.0, 0.0))
    e1 = q.build_eta(gg, q.FirstOrderEta(expr.parse("2*sech(x)")))
    r1 = ops.intertwining_residual(e1, Hf, probes)
    e2 = q.build_eta(gg, q.SecondOrderEta(expr.parse("-2.5*sech(x)"), 0.0, 0.25, pot))
    Hs = q.build_hamiltonian(gg, pot)
    r2 = ops.intertwining_residual(e2, Hs, probes)
    print(f"N={N}: parity {rp:.3e} first-order {r1:.3e} second-order {r2:.3e}")

# --- 3. gauge conjugation direction ---
gg = q.make_grid(16.0, 400)
Hb = q.build_hamiltonian(gg, q.SpecialB1(2.0), gauge)
H0 = q.build_hamiltonian(gg, q.SpecialB1(2.0))
F = ops.gauge_antiderivative(gg, nu)
D = np.exp(-0.5 * F)
u = ops.gaussian_probes(gg)[2]
lhs1 = (np.diag(D) @ H0 @ np.diag(1/D)) @ u
lhs2 = (np.diag(1/D) @ H0 @ np.diag(D)) @ u
rhs = Hb @ u
print("D H D^-1 vs Hb:", np.linalg.norm((lhs1-rhs)[8:-8])/np.linalg.norm(rhs))
print("D^-1 H D vs Hb:", np.linalg.norm((lhs2-rhs)[8:-8])/np.linalg.norm(rhs))

# --- 4. gauged Gram off-diagonals (acc 2 vs acc 4) ---
w_ones = np.ones(1600)
for acc in (2, 4):
    Hb16 = q.build_hamiltonian(g1600, q.SpecialB1(2.0), gauge, acc)
    rep = t(f"eig vectors N=1600 acc{acc}", lambda: eigen.eig(Hb16, want_vectors=True))
    vals = rep.eigenvalues
    idx = [int(np.argmin(np.abs(vals - e))) for e in (-4.0, -1.0, -0.25)]
    print("gauged bound eigs:", vals[idx])
    vecs = [rep.vectors[:, i] for i in idx]
    wg = ops.gauge_weight(g1600, 0.5, nu)
    G = inner.gram(g1600, wg, vecs)
    off = np.max(np.abs(G - np.diag(np.diag(G))))
    Gpt = inner.gram(g1600, w_ones, vecs)
    offpt = np.max(np.abs(Gpt - np.diag(np.diag(Gpt))))
    print(f"acc{acc}: gauged-weight offdiag {off:.3e}; unit-weight offdiag {offpt:.3e}")
    print("   diag:", np.diag(G))

# --- 5. conservation drift ---
for acc in (2, 4):
    Hb16 = q.build_hamiltonian(g1600, q.SpecialB1(2.0), gauge, acc)
    rep = eigen.eig(Hb16, want_vectors=True)
    vals = rep.eigenvalues
    wg = ops.gauge_weight(g1600, 0.5, nu)
    u0 = rep.vectors[:, int(np.argmin(np.abs(vals - (-4.0))))]
    u0n, _ = inner.pseudo_normalize(g1600, wg, u0)
    tr = t(f"evolve ground matched acc{acc}", lambda: evolve.run(Hb16, g1600, wg, u0n, u0n, 5.0, 1e-3))
    print("  ground matched drift:", np.max(np.abs(tr.Q - tr.Q[0]))/abs(tr.Q[0]),
          "defect:", tr.continuity_residual[1:-1].max())
    gs = evolve.gaussian_state(g1600, 0.0, 1.0)
    gsn, _ = inner.pseudo_normalize(g1600, wg, gs)
    tr2 = evolve.run(Hb16, g1600, wg, gsn, gsn, 5.0, 1e-3)
    print("  gaussian matched drift:", np.max(np.abs(tr2.Q - tr2.Q[0]))/abs(tr2.Q[0]))
    w1 = np.ones(1600)
    gs1, _ = inner.pseudo_normalize(g1600, w1, gs)
    tr3 = evolve.run(Hb16, g1600, w1, gs1, gs1, 5.0, 1e-3)
    print("  gaussian unit-weight drift:", np.max(np.abs(tr3.Q - tr3.Q[0]))/abs(tr3.Q[0]))
    tr4 = evolve.run(Hb16, g1600, w1, u0n/np.linalg.norm(u0n), u0n/np.linalg.norm(u0n), 5.0, 1e-3)
    print("  ground unit-weight drift:", np.max(np.abs(tr4.Q - tr4.Q[0]))/abs(tr4.Q[0]))

# --- 6. exceptional point V2 = 2.25, V1 = 2 ---
for N in (800, 1600):
    gg = q.make_grid(16.0, N)
    gc = q.make_grid(16.0, N // 2)
    Hf = q.build_hamiltonian(gg, models.scarf2_raw_potential(2.0, 2.25))
    Hc = q.build_hamiltonian(gc, models.scarf2_raw_potential(2.0, 2.25))
    b = eigen.converged_bound_states(eigen.eig(Hc).eigenvalues, eigen.eig(Hf).eigenvalues)
    print(f"EP N={N}: bound {b.values} max|Im| {np.max(np.abs(b.values.imag)) if len(b.values) else 0:.3e}")
# beyond threshold
Hf = q.build_hamiltonian(g1600, models.scarf2_raw_potential(2.0, 3.0))
Hc = q.build_hamiltonian(g800, models.scarf2_raw_potential(2.0, 3.0))
b = eigen.converged_bound_states(eigen.eig(Hc).eigenvalues, eigen.eig(Hf).eigenvalues)
print("V2=3: bound", b.values)
