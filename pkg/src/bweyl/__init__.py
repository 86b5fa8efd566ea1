"""Exact finite-group machinery for signed-permutation Weyl groups.

Subpackages cover cyclotomic l-adic arithmetic (`cyclo`), root systems and
integer lattices (`roots`), the hyperoctahedral group (`sperm`), the extended
Weyl group with torus torsion (`tits`, `supplement`), a formal root-subgroup
sign calculus (`chevsign`), the isolated-block atlas (`atlas`), linear
character extension maps (`charext`), and the verification driver (`suites`,
`cli`).  All arithmetic is exact; nothing here uses floating point.
"""

__version__ = "0.1.0"


class VerificationError(Exception):
    """A verified identity failed; carries a counterexample payload."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample or {}


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured element budget."""
