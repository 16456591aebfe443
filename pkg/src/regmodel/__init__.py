"""Regular models of the projective line via MacLane valuations, and integral
differential forms on superelliptic curves y^n = f(x)."""

__version__ = "0.1.0"
