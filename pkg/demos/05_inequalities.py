"""Log-Sobolev, Orlicz and Brezis-Lieb checks on randomized fields.

Run: python3 demos/05_inequalities.py
"""
# %%
import math

import numpy as np

from lognls import GaussonParams, brezis_lieb_demo, gausson_field, log_sobolev_gap, luxemburg_norm, make_grid
from lognls.checks import random_bulk_field, run_checks
from lognls.functionals import orlicz_integral

grid = make_grid(1, 12.0, 256)
rng = np.random.default_rng(0)

# %% log-Sobolev gap is nonnegative; zero on Gaussians matched to alpha
u = random_bulk_field(grid, rng)
print("random field gaps:", [f"{log_sobolev_gap(u, a):.3f}" for a in (0.5, 1.0, math.sqrt(math.pi), 3.0)])
phi = gausson_field(GaussonParams(0.0, 1), grid)
print(f"Gausson, alpha=sqrt(pi): {log_sobolev_gap(phi, math.sqrt(math.pi)):.1e}")

# %% Luxemburg norm and the modular sandwich
k = luxemburg_norm(u)
print(f"k={k:.4f}  min(k,k^2)={min(k, k * k):.4f} <= int A={orlicz_integral(u):.4f} <= max={max(k, k * k):.4f}")

# %% Brezis-Lieb residual along a translate sequence (L=16 so shifts up to 8 stay in the bulk)
g16 = make_grid(1, 16.0, 256)
phi16 = gausson_field(GaussonParams(0.0, 1), g16)
for s, r in brezis_lieb_demo(phi16, phi16 * 0.5, range(0, 9)):
    print(f"  shift {s:.0f}: residual {r:.3e}")

# %% the full table printed by `lognls checks`
for res in run_checks(n_fields=20):
    print(f"{res.name:22s} {'PASS' if res.passed else 'FAIL'}  {res.worst:.2e}")
