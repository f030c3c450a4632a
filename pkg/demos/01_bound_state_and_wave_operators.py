# coding: utf-8

# # The impurity bound state and the wave operators
#
# A single on-site potential of strength kappa at the origin of the hopping
# chain pulls one state out of the band [-1, 1].  Its energy, decay rate and
# normalization are closed forms; the scattering states are described by
# the wave operators, whose images span everything except that bound state.

# In[1]:

import numpy as np

from xyness.scattering import completeness_defect, wave_action, wave_gram
from xyness.spectral import bound_state, eigen_residual, eigenfunction

# In[2]:

for kappa in (0.2, 1.0, 3.0):
    bs = bound_state(kappa)
    print(f"kappa={kappa:4.1f}  e_B={bs.e_b:.10f}  lambda_B={bs.lambda_b:.10f}  n_B={bs.n_b:.6f}")

# The eigenvalue equation holds site by site, to rounding:

# In[3]:

bs = bound_state(0.2)
x = np.arange(-20, 21)
print("max residual:", np.max(np.abs(eigen_residual(x, bs))))
print("f_B near the origin:", eigenfunction(np.arange(-3, 4), bs).round(6))

# # Wave operators in momentum space
#
# The image of a site vector under either wave operator is a plane wave plus
# a reflected piece that vanishes as kappa -> 0.

# In[4]:

k = np.linspace(-np.pi, np.pi, 7)
print(np.round(wave_action(k, 0, +1, bs), 6))

# Their Gram matrix on a window of sites is the identity minus the bound
# state projector.

# In[5]:

xs = np.arange(-5, 6)
g = wave_gram(xs, -1, bs)
print("max |G - (1 - |f_B><f_B|)| =", np.max(np.abs(g - completeness_defect(xs, bs))))
print("G_00 =", g[5, 5].real, " 1 - kappa/e_B =", 1 - bs.kappa / bs.e_b)
