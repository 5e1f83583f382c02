"""Ergodic-rate laboratory for a cooperative ambient backscatter link.

A multi-antenna RF source beamforms toward a multi-antenna receiver while a
single-antenna backscatter tag modulates the ambient carrier; the receiver
decodes the direct stream first, cancels it, then decodes the tag stream.
This package provides the Monte Carlo simulation of that receiver over
Rayleigh block fading, the matching closed-form ergodic-rate expressions
(built on hand-rolled Bessel-K and Meijer-G evaluators), and a CLI that
sweeps the operating point and writes CSV tables plus figures.
"""

__version__ = "0.1.0"
