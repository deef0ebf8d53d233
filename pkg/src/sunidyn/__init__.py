"""sunidyn: a numerical lab for simultaneous universality of operator families."""

__version__ = "0.1.0"
