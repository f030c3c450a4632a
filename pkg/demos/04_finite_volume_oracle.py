# coding: utf-8

# # A brute-force check by time evolution
#
# Cut the chain to [-M, M], prepare both halves at their own temperatures,
# switch on the impurity coupling and evolve.  Averaged over a late time
# window, det Theta_n(t) approaches the steady-state P(n) as long as nothing
# reflected at the walls has reached the string.

# In[1]:

from xyness import ChainParams, FiniteVolumeSpec, efp
from xyness.oracle import LightConeError, time_average

p = ChainParams(0.5, 2.0, 0.2, x0=1)
spec = FiniteVolumeSpec(window_radius=300, horizon=150.0, samples=256)

# In[2]:

for n in range(1, 5):
    avg = time_average(n, spec, p)
    exact = efp(n, p).value.real
    print(f"n={n}  oracle={avg.efp:.6f}  analytic={exact:.6f}  diff={avg.efp - exact:+.1e}")

# Asking for a horizon that lets wall reflections in is refused:

# In[3]:

try:
    time_average(4, FiniteVolumeSpec(window_radius=100, horizon=99.0), p)
except LightConeError as exc:
    print("refused:", exc)
