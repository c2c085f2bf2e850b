"""
MUSIC Imaging Package
Subspace imaging of thin inclusions, cracks and small inclusions from far-field MSR data
"""

__version__ = "1.0.0"
