"""Numerical laboratory for spiked sample covariance matrices.

Modules:

* ensembles  - entry laws and matrix assembly
* spectra    - eigenvalues and regime-specific rescaling
* phase      - transition constants, Marchenko-Pastur law, classification
* limitlaws  - Tracy-Widom, critical, and finite-GUE/GOE reference laws
* dyck       - lattice-path combinatorics and the gluing procedure
* genfun     - exact generating-function algebra and growth rates
* momentlab  - exact trace-moment oracles and Monte Carlo comparisons
* harness    - experiment orchestration, statistics, persistence
* acceptance - the runnable acceptance checklist (also via the CLI)
"""

__version__ = "0.1.0"
