"""Relative Dehn function of an HNN-extension of a free group.

F(x, y) relative to <x> and <y> has no relators, so its relative Dehn
function is zero.  Conjugating <y> onto <x> with a stable letter t gives E1;
its sampled Dehn function stays below A·γ̄(γ̄(Bn)) + Cn for small constants.
"""
import relpres
from relpres.area import dehn_sample
from relpres.growth import theorem_bound_check
from relpres.presentations import hnn_extension

base = relpres.load_fixture("f2-rel")
e1 = hnn_extension(base, "K", "H1", {"y": "x"}, name="e1")
print(e1.describe())

# the shipped fixture is the same presentation plus a faithful matrix model
# that settles the word problem quickly
e1 = relpres.load_fixture("e1")
delta = dehn_sample(e1, 6, 2)
gamma = dehn_sample(base, 6, 2)
for n in range(1, delta.N + 1):
    print(f"n={n}: delta={delta(n)} witness {relpres.render(delta.witnesses[n - 1]) or '-'}")

print(theorem_bound_check(delta, gamma))
