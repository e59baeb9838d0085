"""fraxdim: Hausdorff dimension of IRS attractors via graph-directed IFS criteria."""

__version__ = "0.1.0"
