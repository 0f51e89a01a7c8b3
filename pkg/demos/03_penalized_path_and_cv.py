# %%
"""
The L1-penalized logistic path and its cross-validated pick
===========================================================

The solver walks a geometric grid of 100 penalty levels from the largest
useful penalty (everything zero) down to a thousandth of it, warm-starting
each fit from the previous one. Stratified K-fold cross-validation scores
every level by held-out misclassification and picks the winner, breaking
ties toward the sparser end.
"""

import numpy as np

from fans import cross_validate, fit_cv, fit_path, kkt_violation, lambda_max
from fans.rng import stream

gen = stream(2, "demo-plr")

# %%
# Twenty noisy features, three of which actually matter.
n, q = 150, 20
Z = gen.standard_normal((n, q))
true_beta = np.zeros(q)
true_beta[:3] = (2.0, -1.5, 1.0)
y = (gen.random(n) < 1.0 / (1.0 + np.exp(-(Z @ true_beta - 0.4)))).astype(float)

print(f"lambda_max = {lambda_max(Z, y):.4f}  (above this, every slope is zero)")

# %%
# Sparsity along the path: the model grows as the penalty shrinks.
path = fit_path(Z, y)
for t in (0, 20, 40, 60, 80, 99):
    m = path.models[t]
    print(f"lambda {path.lambdas[t]:.5f}: {np.count_nonzero(m.coefficients):>2} active")

# %%
# Every model on the path satisfies the stationarity conditions of its own
# optimization problem; this is the solver's correctness certificate.
print("worst stationarity violation:", max(kkt_violation(Z, y, m) for m in path.models))

# %%
# Cross-validation. The error curve is flat and bad at the top (nothing
# fitted), dips where the real signal enters, and creeps back up as noise
# coordinates pile in.
cv = cross_validate(Z, y, seed=7)
for t in (0, cv.selected_index // 2, cv.selected_index, 99):
    marker = "  <- selected" if t == cv.selected_index else ""
    print(f"lambda {path.lambdas[t]:.5f}: cv error {cv.mean_error[t]:.3f}{marker}")

# %%
# fit_cv refits on all rows at the selected penalty. The refit finds the
# three real coordinates (plus, possibly, a few small noise ones).
model, _ = fit_cv(Z, y, seed=7)
active = model.active_set()
print("active coordinates:", active.tolist())
print("their coefficients:", np.round(model.coefficients[active], 3).tolist())
