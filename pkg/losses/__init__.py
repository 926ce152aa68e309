"""
Contour-aware HOG descriptor and reconstruction losses
"""

from losses.hog import hog, image_gradients, normalize_descriptor, orientation_histograms, to_grayscale
from losses.reconstruction import ir_loss, lca_loss, pix_loss

__all__ = ['to_grayscale', 'image_gradients', 'orientation_histograms', 'normalize_descriptor', 'hog',
           'lca_loss', 'pix_loss', 'ir_loss']
