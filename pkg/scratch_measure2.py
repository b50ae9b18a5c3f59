"""Second measurement batch: exact-weight Gram/conservation, misc oracles."""
import time

import numpy as np

import etaqm as q
from etaqm import operators as ops
from etaqm import models, eigen, inner, evolve, expr

nu = expr.parse("tanh(x)")
gauge = q.GaugeSpec(0.5, nu)
g1600 = q.make_grid(16.0, 1600)
x = g1600.points
w_exact = 1.0 / np.cosh(x)          # exp(-2*0.5*ln cosh) analytically
w_trap = ops.gauge_weight(g1600, 0.5, nu)
print("trapezoid-vs-exact weight err:", np.max(np.abs(w_trap - w_exact)))

for acc in (2, 4):
    Hb = q.build_hamiltonian(g1600, q.SpecialB1(2.0), gauge, acc)
    rep = eigen.eig(Hb, want_vectors=True)
    vals = rep.eigenvalues
    idx = [int(np.argmin(np.abs(vals - e))) for e in (-4.0, -1.0, -0.25)]
    vecs = [rep.vectors[:, i] for i in idx]
    G = inner.gram(g1600, w_exact, vecs)
    off = np.max(np.abs(G - np.diag(np.diag(G))))
    print(f"acc{acc} exact-weight gauged Gram offdiag: {off:.3e} diag {np.diag(G)}")
    u0n, _ = inner.pseudo_normalize(g1600, w_exact, vecs[0])
    gs = evolve.gaussian_state(g1600, 0.0, 1.0)
    gsn, _ = inner.pseudo_normalize(g1600, w_exact, gs)
    tr = evolve.run(Hb, g1600, w_exact, gsn, gsn, 5.0, 1e-3)
    print(f"  acc{acc} gaussian exact-weight drift:", np.max(np.abs(tr.Q - tr.Q[0])) / abs(tr.Q[0]),
          " defect:", tr.continuity_residual[1:-1].max())

# ungauged PT Gram for SpecialB1 (should be ~exact)
H0 = q.build_hamiltonian(g1600, q.SpecialB1(2.0))
rep0 = eigen.eig(H0, want_vectors=True)
vals0 = rep0.eigenvalues
idx0 = [int(np.argmin(np.abs(vals0 - e))) for e in (-4.0, -1.0, -0.25)]
vecs0 = [rep0.vectors[:, i] for i in idx0]
G0 = inner.gram(g1600, np.ones(1600), vecs0)
print("PT Gram offdiag (ungauged):", np.max(np.abs(G0 - np.diag(np.diag(G0)))), "diag", np.diag(G0))

# eta+ / eta- for parity + first-order on the d=2 fixture
gg = q.make_grid(16.0, 1600)
probes = ops.gaussian_probes(gg)
Hf = q.build_hamiltonian(gg, q.FirstOrderFamily(2.0, 0.0))
eta = q.build_eta(gg, q.ParityEta()) + q.build_eta(gg, q.FirstOrderEta(expr.parse("2*sech(x)")))
plus, minus = ops.eta_plus_minus(eta)
print("eta+ resid:", ops.intertwining_residual(plus, Hf, probes),
      "eta- resid:", ops.intertwining_residual(minus, Hf, probes))

# factorization fixture
pot = q.scarf2_potential(2.0, 1.0)
a = expr.parse("-2.5*sech(x)")
eta2 = q.build_eta(gg, q.SecondOrderEta(a, 0.0, 0.25, pot))
rep = ops.verify_factorization(gg, a, 0.0, expr.parse("tanh(x)/2"), eta2, probes)
print("factorization:", rep)
repw = ops.verify_factorization(gg, a, 0.0, expr.parse("tanh(x)"), eta2, probes)
print("wrong-r riccati defect:", repw.riccati_defect)

# gauge spectra equivalence at two resolutions
for N in (400, 800):
    ggn = q.make_grid(16.0, N)
    gcn = q.make_grid(16.0, N // 2)
    Hb = q.build_hamiltonian(ggn, q.SpecialB1(2.0), gauge)
    Hc = q.build_hamiltonian(gcn, q.SpecialB1(2.0), gauge)
    b1 = eigen.converged_bound_states(eigen.eig(Hc).eigenvalues, eigen.eig(Hb).eigenvalues)
    H0n = q.build_hamiltonian(ggn, q.SpecialB1(2.0))
    H0c = q.build_hamiltonian(gcn, q.SpecialB1(2.0))
    b0 = eigen.converged_bound_states(eigen.eig(H0c).eigenvalues, eigen.eig(H0n).eigenvalues)
    print(f"N={N} gauged bound {np.round(b1.values,6)} vs ungauged {np.round(b0.values,6)}")

# free particle lowest level
g8 = q.make_grid(8.0, 400)
Hfree = q.build_hamiltonian(g8, q.CustomPotential(expr.parse("0")))
rfree = eigen.eig(Hfree)
print("free lowest:", rfree.eigenvalues[0], "vs", (np.pi / 16) ** 2)

# multiplicative eta weight error vs C h^2
for N in (400, 800):
    ggn = q.make_grid(16.0, N)
    wN = ops.gauge_weight(ggn, 0.5, nu)
    err = np.max(np.abs(wN - 1 / np.cosh(ggn.points)))
    print(f"N={N} mult weight err {err:.3e}  err/h^2 {err/ggn.h**2:.3f}")

# oracle checks: general-B scarf2 and first-order levels, N=1600 (values only)
def bound_for(potential, N=1600):
    gf = q.make_grid(16.0, N)
    gc = q.make_grid(16.0, N // 2)
    Hf = q.build_hamiltonian(gf, potential)
    Hc = q.build_hamiltonian(gc, potential)
    return eigen.converged_bound_states(eigen.eig(Hc).eigenvalues, eigen.eig(Hf).eigenvalues)

t0 = time.time()
for (A, B) in ((2.0, 0.5), (0.975, 2.0), (2.5, 1.5)):
    ls = q.scarf2_levels(A, B)
    V1, V2 = q.scarf2_strengths(A, B)
    b = bound_for(q.scarf2_raw_potential(V1, V2))
    analytic = ls.all_levels()
    devs = [min(abs(b.values - e)) for e in analytic]
    print(f"(A={A},B={B}): analytic {analytic} numeric {np.round(b.values.real,5)} devs {np.round(devs,6)}")
for d in (1.0, 2.5, 4.0):
    ls = q.first_order_levels(d, 0.0)
    b = bound_for(q.FirstOrderFamily(d, 0.0))
    devs = [min(abs(b.values - e)) for e in ls.all_levels()]
    print(f"d={d}: analytic {ls.all_levels()} numeric {np.round(b.values.real,5)} devs {np.round(devs,6)}")
print("oracle batch:", time.time() - t0, "s")
