import os

from hypothesis import HealthCheck, settings

from mqinv.field import field_of_size
from mqinv.polyring import PolySystem, parse_polynomial

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def poly(text, q, n):
    return parse_polynomial(text, field_of_size(q), n)


def system(texts, q, n):
    return PolySystem([poly(t, q, n) for t in texts])
