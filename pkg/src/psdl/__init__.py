"""Scene layout programs: a small imperative DSL, layout losses, and
search-based repair of faulty programs."""

__version__ = "0.1.0"
