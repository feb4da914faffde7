""" Feature and label ingestion, synthetic sequences, noise corruption and PCA export. """

from .matrix_io import load_matrix, save_matrix, load_labels, save_labels, MAGIC
from .synthetic import SyntheticSpec, generate_synthetic, orthogonal_bases
from .noise import NoiseSpec, corrupt
from .pca import pca_project, pca_frame, export_pca
from .sampling import downsample, upsample_labels, check_factor
