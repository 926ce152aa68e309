"""
Helper classes and utilities for Pixel Adapter Bench
"""
