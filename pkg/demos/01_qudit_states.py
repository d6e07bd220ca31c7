"""
Qudit states and the Bell/cat families
======================================

Builds the basic objects for d=3 and checks the relations the protocols
rely on.
"""
import itertools

import numpy as np

from ampqc.qudit import (
    BellLabel,
    CatLabel,
    apply_local,
    bell_state,
    cat_state,
    fourier_state,
    singlet_state,
    weyl_operator,
)

d = 3

# %% Fourier basis vectors have flat amplitudes with rotating phases
print("F|1> =", np.round(fourier_state(d, 1).amps, 3))

# %% The d*d Bell states form an orthonormal basis of two qudits
bells = np.column_stack([bell_state(d, BellLabel(u, v)).amps for u, v in itertools.product(range(d), repeat=2)])
print("Bell Gram matrix is identity:", np.allclose(bells.conj().T @ bells, np.eye(d * d)))

# %% A local Weyl operator on the second qudit moves |phi(0,0)> to |phi(u,v)>
encoded = apply_local(bell_state(d, BellLabel(0, 0)), weyl_operator(d, BellLabel(1, 2)), 1)
print("(I x U(1,2))|phi(0,0)> == |phi(1,2)>:", encoded.allclose(bell_state(d, BellLabel(1, 2))))

# %% Cat states: one phase mark plus shift marks
cat = cat_state(d, CatLabel((1, 0, 2)))
print("<cat(1,0,2)|cat(1,0,2)> =", round(abs(cat.inner(cat)), 12))
print("<cat(2,0,2)|cat(1,0,2)> =", round(abs(cat_state(d, CatLabel((2, 0, 2))).inner(cat)), 12))

# %% The three-particle singlet is antisymmetric: six terms, signs by inversion parity
amps = singlet_state(3).tensor()
for perm in itertools.permutations(range(3)):
    print(perm, f"{amps[perm].real:+.4f}")
