""" Spectral clustering of learned affinities and segmentation metrics. """

from .kmeans import kmeans, lloyd, assign_labels
from .spectral import spectral_cluster, spectral_embedding, cosine_affinity
from .metrics import accuracy, nmi, confusion_matrix, EvalReport, evaluate
