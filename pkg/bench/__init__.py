"""
Command implementations: verification suites, scaling benchmark, plotting and the image demo
"""
