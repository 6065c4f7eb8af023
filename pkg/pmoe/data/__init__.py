from .dataset import Dataset, standardize
from .orthogonal import OrthogonalizedDataset, gram_schmidt
from .csvio import read_csv, write_csv, dichotomize
