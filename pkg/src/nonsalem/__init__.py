"""Fourier decay of torus measures and numerical checks of lattice-counting bounds."""

from .bounds import (
    BoundReport,
    SeriesReport,
    badness,
    borel_cantelli_scan,
    non_salem_witness,
    tail_bound_T,
    theorem3_lower,
    theorem3_upper,
    theorem5_lower,
    theorem5_upper,
    verify_parseval,
)
from .bumps import BumpProfile
from .fourier import DecayProfile, FourierTable, decay_profile, restricted_sum, transform
from .lattice import (
    LatticeNeighborhood,
    LinearFormSpec,
    PlaneUnionMeasure,
    in_lattice_neighborhood,
    in_linear_form,
    measure_of_lattice_neighborhood,
    measure_of_linear_form,
    mollified_plane_density,
    plane_fourier_coefficient,
    plane_fourier_quadrature,
)
from .measures import (
    AtomicMeasure,
    GridMeasure,
    approximant_measure,
    localize,
    make_atomic,
    make_uniform_grid,
    random_measure,
)

__version__ = "0.1.0"
