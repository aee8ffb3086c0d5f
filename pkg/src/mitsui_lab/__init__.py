"""Prime elements in number fields: exact arithmetic, fundamental domains,
prime sieving, ray-class tori and the Mitsui-type counting formula."""

__version__ = "0.1.0"
