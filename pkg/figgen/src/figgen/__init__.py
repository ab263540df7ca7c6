"""Figure rendering for the driven-qubit CSV datasets."""

from .csvio import Dataset, SchemaError, read_dataset
from .render import BUILDERS, FigureJob, render

__version__ = "0.1.0"

__all__ = ["BUILDERS", "Dataset", "FigureJob", "SchemaError", "read_dataset",
           "render", "__version__"]
