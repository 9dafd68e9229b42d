"""Physical constants (SI)."""

# vacuum permeability [H/m]
MU0 = 1.25663706212e-6
# vacuum permittivity [F/m]
EPS0 = 8.8541878128e-12
# Boltzmann constant [J/K]
KB = 1.380649e-23
# electron gyromagnetic ratio [rad/(s*T)]
GAMMA_E = 1.76e11
