"""Certify the central quartic of A0 * B2 and print it with sympy."""
from s3circles import build, named_circle
from s3circles.implicit import certify_degree

cert = certify_degree(build(named_circle("A0"), named_circle("B2")), "central", 4)
print(f"degree {cert.degree}, kernel dimension {cert.kernel_dim}")
print(cert.poly.to_sympy())
