# coding: utf-8

# # Meridional characters
#
# exp(-2 pi i A) for commuting residues, checked against RK4 transport around a
# small loop.

# In[1]:

import numpy as np

from logpoisson import linalg
from logpoisson.monodromy import (LeafLetter, MeridianLetter, format_complex,
                                  format_complex_matrix, meridional_character,
                                  transport_1d, twisted_rep_eval)
from logpoisson.series import Scalar

A = [linalg.diag([Scalar("1/2"), Scalar("1/3")])]
M = meridional_character(A, [1])
print(format_complex_matrix(M))


# In[2]:

for a in ("1/2", "1/3", "-2/5"):
    y = transport_1d(Scalar(a), steps=20000)
    print(a, format_complex(y, 12), abs(y - meridional_character([[[Scalar(a)]]], [1])[0, 0]))


# A homomorphism: m -> M(m) turns sums into products.

# In[3]:

M2 = meridional_character(A, [2])
print(np.max(np.abs(M2 - M @ M)))


# Leaf generators act by conjugation in a word.

# In[4]:

rho = {"a": np.array([[0, 1], [1, 0]], dtype=complex)}
word = [LeafLetter("a"), MeridianLetter((1,)), LeafLetter("a", True)]
print(format_complex_matrix(twisted_rep_eval(rho, A, word)))
