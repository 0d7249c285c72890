# coding: utf-8

# # Rank-2 connections on L(1,1,1,1)
#
# Four parameters with a0 + a1 + a2 + a3 = 0 give a log-canonical bracket on C^4.

# In[1]:

from logpoisson.chart import check_h3
from logpoisson.errors import ShapeError
from logpoisson.poisson import Polyvector
from logpoisson.rank2 import (L1111Params, coord_criterion_check, l1111_structure,
                              l1111_triple, mc_check, xi_closed_check)

p = L1111Params((1, -1, 2, -2))
C = l1111_structure(p)
for key, c in sorted(p.constants().items()):
    print(key, c)


# In[2]:

print("H3:", bool(check_h3(C)))
print("closed Hamiltonians:", bool(xi_closed_check(C)))


# The triple (d0, -v/2, 0) solves the Maurer-Cartan system; the curvature of the
# assembled sl2 matrix agrees.

# In[3]:

t = l1111_triple(C)
r = mc_check(C.P, t)
print(r.flat, r.curvature_flat)
print("v =", t.v)


# A separated field z0^2 d0 is not Poisson.  The pairwise test and the
# Lichnerowicz differential agree on that.

# In[4]:

ring = C.ring
z0 = ring.var(0)
crit = coord_criterion_check(C.P, Polyvector.vector(ring, {0: z0 * z0}))
print(crit.ok, crit.fails, crit.agrees)


# In[5]:

try:
    L1111Params((1, 1, 1, 1))
except ShapeError as exc:
    print(exc)
