"""The Gausson and the functionals of the energy space.

Run: python3 demos/01_gausson_functionals.py
"""
# %%
import math

from lognls import GaussonParams, d_closed, elliptic_residual, gausson_field, make_grid, report

grid = make_grid(1, 12.0, 256)

# %% the Gausson solves the stationary equation for every omega
for omega in (-1.0, 0.0, 1.0):
    phi = gausson_field(GaussonParams(omega, 1), grid)
    print(f"omega={omega:+.0f}  residual={elliptic_residual(phi, omega):.1e}")

# %% it sits on the Nehari manifold and its action is d(omega)
phi = gausson_field(GaussonParams(0.0, 1), grid)
rep = report(phi, 0.0)
print(rep.to_csv(), end="")
print(f"d_closed = {d_closed(0.0, 1):.12f}, charge/2 = {rep.charge / 2:.12f}")

# %% scaling breaks stationarity by a constant log shift
print(f"residual(1.1 phi) = {elliptic_residual(phi * 1.1, 0.0):.6f}  vs log(1.21) = {math.log(1.21):.6f}")
