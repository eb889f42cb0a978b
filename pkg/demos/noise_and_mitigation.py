"""Simulated noisy run: readout confusion, finite shots, mitigation, and
spectral correction — and why the parts-based reconstruction wins.

Readout noise is modeled per qubit as a 2x2 column-stochastic confusion
matrix (values taken from a published hardware calibration). We sample
finite-shot counts for every setting, reconstruct with and without
mitigation, and compare the full three-qubit tomography against the
whole-from-parts route that only ever measures two qubits at a time.
"""

import numpy as np

from wtomo import ExperimentConfig, ReadoutModel, run_pipeline, w_vector

model = ReadoutModel.ibm_osaka()
print("per-qubit readout confusion (p01 = P(read 0 | sent 1), p10 = P(read 1 | sent 0)):")
for name, q in zip("ABC", model.qubits):
    print(f"  qubit {name}: p01 = {q.p01:.3f}, p10 = {q.p10:.3f}")
print()

cfg = ExperimentConfig(shots=20000, trials=5, seed=1234, noise=model)
results = run_pipeline(cfg)

print("trial  f_full(raw)  f_full(mitigated)  f_parts(raw)  f_parts(mitigated)")
for r in results:
    u, m = r.reports[False], r.reports[True]
    print(
        f"{r.trial_id:5d}  {u.f_full:11.4f}  {m.f_full:17.4f}"
        f"  {u.f_parts:12.4f}  {m.f_parts:17.4f}"
    )

wins_mit = sum(r.reports[True].f_full >= r.reports[False].f_full for r in results)
wins_parts = sum(r.reports[True].f_parts >= r.reports[True].f_full for r in results)
print()
print(f"mitigation improved the full-tomography fidelity in {wins_mit}/5 trials")
print(f"whole-from-parts beat full tomography in {wins_parts}/5 trials")
print()
print(
    "the parts route wins because each two-qubit marginal needs fewer noisy\n"
    "settings and the pure-state hypothesis acts as a strong regularizer"
)
