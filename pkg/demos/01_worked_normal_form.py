# coding: utf-8

# # A normal form on C^2
#
# Log-canonical bracket {z1, z2} = z1 z2, both axes in the divisor.  We take the
# Euler-Poisson connection with residues (diag(1/2, 0), 0), gauge it by I + z1 E12
# and ask the normaliser to undo the gauge.

# In[1]:

from logpoisson import linalg
from logpoisson.chart import LogChart, log_hamiltonian
from logpoisson.connection import ep_principal, frame_curvature, gauge_transform
from logpoisson.poisson import PoissonStructure
from logpoisson.ppd import normalize
from logpoisson.series import ZERO, Ring, Scalar

ring = Ring(2, (0, 1), trunc=5, labels=("z1", "z2"))
C = LogChart(PoissonStructure.log_canonical(ring, {(0, 1): Scalar(1)}))
print(C.P.sigma)


# The log Hamiltonians are Euler fields: X1 = z2 d2, X2 = -z1 d1.

# In[2]:

for pos in range(2):
    print("X%d =" % (pos + 1), log_hamiltonian(C, pos))


# In[3]:

A = [linalg.diag([Scalar("1/2"), ZERO]), linalg.zeros(2)]
Th0 = ep_principal(C, A, 2)
z1 = ring.var(0)
Th = gauge_transform(C, Th0, [[ring.one(), z1], [ring.zero(), ring.one()]])
print(Th)


# Still flat after the gauge:

# In[4]:

K = frame_curvature(C, Th)
print(all(not x for row in K for x in row))


# In[5]:

res = normalize(C, Th, 4)
print("residues:", res.residues)
for rec in res.certificate:
    print(rec.degree, rec.solution, [d.text() for d in rec.denominators])


# Degree one carries the whole correction, -z1 E12, divided by the weight 1/2.
# The gauge found is exactly the inverse of the one we applied.

# In[6]:

print(res.gauge)
