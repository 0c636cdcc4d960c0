"""Print the type I and type III topology reports as JSON."""
from s3circles import build, named_circle
from s3circles.topology import touching_tori_certificate, type_three_checks

A0 = named_circle("A0")
print(touching_tori_certificate(build(A0, named_circle("B1"))).dumps())
print(type_three_checks(build(A0, named_circle("B3"))).dumps())
