"""
Sturmian couplings, Bertrand orbits, statistical screening and Madelung
filling, each closed form paired with an independent numerical check.

Modules
-------
specfun    Gegenbauer, Legendre and hyperspherical functions
geometry   stereographic maps, inversion, Hopf map, Pluecker and so(4)
spectra    closed-form levels and coupling laws
sturm      radial Sturmian eigensolver
dynamics   orbit integration and analysis
atomstat   Thomas-Fermi and Tietz screening
ptable     filling orders and period structure
cli        command-line front end
"""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DomainError, NotAnEigenvalueError,  # noqa: F401
                     SearchWindowError, SingularityError, UnsupportedModelError,
                     ZeroConformalFactorError)
