"""paraqutrit: numerical Z3 parafermion chain toolkit.

Braiding Berry phases via projective imaginary-time evolution, qutrit
contextuality witnesses (stabilizer magic witness and the pentagon
inequality), chain and bare-qutrit noise channels, simulated process
tomography, and Jones-calculus compilation of the photonic gates.
"""

__version__ = "0.1.0"
