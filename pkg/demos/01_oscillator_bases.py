"""Finite oscillator bases on a small screen.

Builds the one-dimensional Kravchuk functions, checks that they are the
eigenvectors of the mode generator, then assembles the polar modes of a
7 x 7 screen and shows that a rotation only multiplies them by phases.
"""
import numpy as np

from finrot import (OscillatorRep, build_kernel_cartesian, enumerate_polar_indices, polar_matrix,
                    su2_generators, wavefunction_table)

# %% One dimension: N = 7 pixels, j = 3
rep = OscillatorRep.from_size(7)
W = wavefunction_table(rep).values
print("positions q:", rep.positions)
print("Psi_0 (a discrete Gaussian):", np.round(W[0], 4))

K = su2_generators(rep).K
for n in range(rep.N):
    residual = np.abs(K @ W[n] - (rep.j - n) * W[n]).max()
    print(f"  K Psi_{n} = {rep.j - n:+.0f} Psi_{n}   residual {residual:.1e}")

# %% Two dimensions: 49 polar labels (n, m)
labels = enumerate_polar_indices(rep)
print("\nnumber of polar modes:", len(labels))
print("first shells:", [(i.n, i.m) for i in labels[:9]])

L, ms = polar_matrix(rep)
print("Gram residual:", np.abs(L.conj().T @ L - np.eye(49)).max())

# %% Rotation acts on a polar mode through the phase exp(-i m theta)
theta = 0.4
R = build_kernel_cartesian(rep, theta).matrix
col = 12
mode = L[:, col]
rotated = R @ mode.real + 1j * (R @ mode.imag)
print(f"\nmode {labels[col]}: |R Lambda - exp(-i m theta) Lambda| =",
      np.abs(rotated - np.exp(-1j * ms[col] * theta) * mode).max())
