# coding: utf-8

# # Decay rates
#
# P(n) decays exponentially.  The rate splits into a part set by the right
# reservoir alone and a part mixing both reservoirs through the transmission
# probability sin^2 k / (sin^2 k + kappa^2) of the impurity.

# In[1]:

import numpy as np

from xyness import ChainParams, asymptotic_profile, decay_rates
from xyness.szego import jump_magnitude, rate_identity_error, symbol_jump_diagnostic

p = ChainParams(0.5, 2.0, 0.2, x0=1)

# In[2]:

r = decay_rates(p)
print(f"Gamma_L={r.gamma_L:.8f}  Gamma_B={r.gamma_B:.8f}  Gamma_R={r.gamma_R:.8f}")
print("ordered:", r.ordered, "  total:", r.gamma_total)
print("identity with the geometric mean of the symbol:", rate_identity_error(p))

# Gamma_B interpolates between the left and right rates as kappa grows:

# In[3]:

for kappa in (1e-4, 0.05, 0.2, 1.0, 5.0, 1e4):
    rk = decay_rates(p.replace(kappa=kappa))
    print(f"kappa={kappa:8.0e}  Gamma_B={rk.gamma_B:.8f}")

# # Approach to the Szego asymptotics
#
# P(n) / G(a)^n settles to a constant; the fitted slope of -log P(n)
# reproduces the total rate.

# In[4]:

prof = asymptotic_profile(p, 120)
for n in (10, 30, 60, 90, 120):
    print(f"n={n:3d}  P(n)/G^n = {np.exp(prof.log_ratio[n - 1]):.10f}")
print("fitted rate:", prof.fitted_rate, " predicted:", prof.gamma_total)

# # Regularity of the symbol
#
# The symbol is continuous with a continuous first derivative, but its
# second derivative jumps at 0 and at pi.  Both jumps have the same sign.

# In[5]:

d = symbol_jump_diagnostic(p)
print("jump at 0 :", d.measured_zero)
print("jump at pi:", d.measured_pi)
print("closed form:", jump_magnitude(p))
