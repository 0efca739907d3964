from segrezeta.chowring import AmbientSpec, ChowClass, IntPoly


def cls(ambient, text):
    """Chow class from a polynomial string in the ambient's class variables."""
    if not isinstance(ambient, AmbientSpec):
        ambient = AmbientSpec(ambient)
    poly = IntPoly.parse(text, ambient.class_vars)
    return ChowClass(poly.coeffs, ambient)
