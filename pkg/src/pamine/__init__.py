"""pamine: mining performance-appraisal text.

Classifies supervisor-assessment sentences, maps them onto performance
attributes, clusters strength/weakness nouns over word embeddings, and
builds exact phrase-selection summaries of peer feedback with a ROUGE +
t-test evaluation harness.
"""
from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
