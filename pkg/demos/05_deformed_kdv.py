"""Deformed KdV flows on a periodic grid.

Transports a soliton, contrasts Galilean covariance of the two
deformations, checks PT covariance of complex data, and reports the
nonexistent eps = 3 traveling wave.
"""

import numpy as np

from ptlab import kdv

# classical soliton transport under the variational flow at eps = 1
rep = kdv.traveling_wave(1, 1.0)
print("soliton transport defect:", kdv.traveling_wave_defect(rep, dt=1e-3))

# Galilean boost: exact for the variational deformation, broken otherwise
f = kdv.KdVField.from_callable(lambda x: 2.0 * np.cos(2 * np.pi * x / 40.0),
                               40.0, 128)
good = kdv.galilean_defect(f, "fring", 3.0, 0.1, 0.5, 1e-4)
bad = kdv.galilean_defect(f, "bender", 3.0, 0.1, 0.5, 1e-4)
print(f"Galilean defect at eps=3: fring {good:.2e}   bender {bad:.2e}")

# PT covariance: reflected data follows the time-reversed flow
u0 = kdv.KdVField.from_callable(
    lambda x: 0.1 * np.cos(2 * np.pi * x / 20.0)
    + 0.05j * np.sin(4 * np.pi * x / 20.0), 20.0, 64)
print("PT covariance defect:",
      kdv.pt_covariance_defect(u0, "fring", 2.0, 0.05, 5e-4))

# conserved charges along a deformed flow
ev = kdv.evolve(u0, "fring", 2.0, 0.05, 5e-4)
print("charge drift:", ev.monitor.drift())

# no decaying traveling wave exists at eps = 3 with positive speed
rep3 = kdv.traveling_wave(3, 1.0)
print(f"\neps=3 traveling wave exists: {rep3.exists} ({rep3.reason})")
