""" Segmentation runs and experiment sweeps. """

from .experiments import (run_segmentation, run_seeds, run_ablation, run_noise_curve, run_benchmark,
                          summarize_scores, resolve_clusters, parallel_map, SegmentationResult,
                          ABLATION_GATES, N_SEEDS, BENCH_SIZES, BENCH_DIM)
