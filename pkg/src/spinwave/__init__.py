"""Generalized rotation wavefunctions with a real internal projection n.

Modules: ``halfangle_algebra`` (monomial algebra and J± action),
``wavefunctions`` (ladder construction), ``regularization`` (inner
products with divergent terms removed), ``coupling`` (Clebsch-Gordan
coefficients at real projections and integrated squares),
``observables``, ``reactions`` and ``cli``.
"""

__version__ = "0.1.0"
