"""Image reconstruction from parallel-beam Radon projections via orthogonal
polynomial expansions on the disk and the cylinder."""

from .analysis import NormScan, convergence_study, error_metrics, lebesgue, norm_scan, s2m_oracle
from .errors import DomainError, FormatError, InvalidParameterError, OPEDError
from .kernel import (
    KernelTable,
    Multiplier,
    build_table,
    eta_default,
    kernel_closed,
    kernel_eta,
    kernel_sum,
    phi_nu,
)
from .polycore import (
    AngleGrid,
    QuadratureRule,
    angle_grid,
    cheb_t,
    cheb_u,
    gauss_t_nodes,
    gauss_u_rule,
    ridge_u,
    scaled_cheb_t,
)
from .radon import (
    EllipseComponent,
    GaussianBump,
    Phantom,
    RidgePolynomial,
    Sinogram2D,
    Sinogram3D,
    load_phantom,
    parse_phantom,
    radon_ellipse,
    radon_numeric,
    radon_poly,
    sinogram2d,
    sinogram3d,
)
from .recon2d import Image, ImageGrid, reconstruct, reconstruct_eta, reconstruct_general, reconstruct_point
from .recon3d import CylinderImage, phi_nu_3d, reconstruct3d

__version__ = "0.1.0"

__all__ = [
    "angle_grid",
    "AngleGrid",
    "build_table",
    "cheb_t",
    "cheb_u",
    "convergence_study",
    "CylinderImage",
    "DomainError",
    "EllipseComponent",
    "error_metrics",
    "eta_default",
    "FormatError",
    "gauss_t_nodes",
    "gauss_u_rule",
    "GaussianBump",
    "Image",
    "ImageGrid",
    "InvalidParameterError",
    "kernel_closed",
    "kernel_eta",
    "kernel_sum",
    "KernelTable",
    "lebesgue",
    "load_phantom",
    "Multiplier",
    "norm_scan",
    "NormScan",
    "OPEDError",
    "parse_phantom",
    "Phantom",
    "phi_nu",
    "phi_nu_3d",
    "QuadratureRule",
    "radon_ellipse",
    "radon_numeric",
    "radon_poly",
    "reconstruct",
    "reconstruct3d",
    "reconstruct_eta",
    "reconstruct_general",
    "reconstruct_point",
    "ridge_u",
    "RidgePolynomial",
    "s2m_oracle",
    "scaled_cheb_t",
    "Sinogram2D",
    "sinogram2d",
    "Sinogram3D",
    "sinogram3d",
]
