#!/usr/bin/env python3
"""Independent colourimetry reference used to freeze expected values in the
C++ unit tests.  Implements the sRGB transfer function, CIE XYZ / L*a*b*
(D65), the Hunt-Pointer-Estevez LMS fundamentals and the LMS-opponent
transform directly from the defining formulae, with no code shared with the
library under test.
"""

import numpy as np

# sRGB <-> linear (IEC 61966-2-1)
def srgb_decode(c):
    c = np.asarray(c, dtype=float)
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)

def srgb_encode(c):
    c = np.asarray(c, dtype=float)
    return np.where(c <= 0.0031308, 12.92 * c, 1.055 * c ** (1 / 2.4) - 0.055)

# linear sRGB -> XYZ, D65 white (sRGB primaries)
RGB2XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
WHITE_XYZ = RGB2XYZ @ np.ones(3)   # row sums: white rgb(1,1,1) by construction

# Hunt-Pointer-Estevez cone fundamentals (XYZ -> LMS), then renormalised so
# that D65 white maps exactly to (1,1,1).
HPE = np.array([
    [0.38971, 0.68898, -0.07868],
    [-0.22981, 1.18340, 0.04641],
    [0.00000, 0.00000, 1.00000],
])
WHITE_LMS_RAW = HPE @ WHITE_XYZ
RGB2LMS = np.diag(1.0 / WHITE_LMS_RAW) @ HPE @ RGB2XYZ   # white -> (1,1,1)

# Opponent axes on white-normalised LMS, cone weights halved so the
# achromatic axis equals (L+M) of the rescaled cones:
#   lum = (l+m)/2, rg = (l-m)/2, yv = s-(l+m)/2
# Chromatic axes are then scaled by their max |value| over the RGB cube
# corners so every in-gamut colour lands in [-1,1].
OPPONENT = np.array([
    [0.5, 0.5, 0.0],
    [0.5, -0.5, 0.0],
    [-0.5, -0.5, 1.0],
])

def cube_corners():
    return np.array([(r, g, b) for r in (0, 1) for g in (0, 1) for b in (0, 1)], dtype=float)

RAW_DKL = (OPPONENT @ RGB2LMS @ cube_corners().T).T
RG_MAX = np.max(np.abs(RAW_DKL[:, 1]))
YV_MAX = np.max(np.abs(RAW_DKL[:, 2]))
RGB2DKL = np.diag([1.0, 1.0 / RG_MAX, 1.0 / YV_MAX]) @ OPPONENT @ RGB2LMS

def lab_f(t):
    d = 6.0 / 29.0
    return np.where(t > d ** 3, np.cbrt(t), t / (3 * d * d) + 4.0 / 29.0)

def rgb_to_lab(rgb):
    xyz = RGB2XYZ @ np.asarray(rgb, dtype=float)
    fx, fy, fz = lab_f(xyz / WHITE_XYZ)
    return np.array([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)])


def main():
    np.set_printoptions(precision=17)
    print("== frozen expected values ==")
    g = srgb_decode(0.5)
    print(f"srgb_decode(0.5)            = {g:.17g}")
    lab_mid = rgb_to_lab([0.5, 0.5, 0.5])
    print(f"lab(linear 0.5 grey)        = L*={lab_mid[0]:.17g} a*={lab_mid[1]:.3g} b*={lab_mid[2]:.3g}")
    print(f"lab(white)                  = {rgb_to_lab([1,1,1])}")
    print(f"srgb_encode(srgb_decode(.5))= {srgb_encode(g):.17g}")

    print("\n== matrix sanity ==")
    print("white LMS  :", RGB2LMS @ np.ones(3))
    print("grey DKL   :", RGB2DKL @ (0.5 * np.ones(3)))
    print("rg scale   :", RG_MAX, " yv scale:", YV_MAX)
    corners = cube_corners()
    dkl = (RGB2DKL @ corners.T).T
    print("DKL corner ranges: lum", dkl[:, 0].min(), dkl[:, 0].max(),
          "| rg", dkl[:, 1].min(), dkl[:, 1].max(),
          "| yv", dkl[:, 2].min(), dkl[:, 2].max())
    print("round-trip |err| dkl:", np.max(np.abs(np.linalg.inv(RGB2DKL) @ dkl.T - corners.T)))

    # random matrix-multiply probe frozen into the unit tests
    rng = np.random.default_rng(12345)
    probe = rng.uniform(size=3)
    print("\nprobe rgb  :", ", ".join(f"{v:.17g}" for v in probe))
    print("probe lms  :", ", ".join(f"{v:.17g}" for v in RGB2LMS @ probe))
    print("probe dkl  :", ", ".join(f"{v:.17g}" for v in RGB2DKL @ probe))
    print("probe lab  :", ", ".join(f"{v:.17g}" for v in rgb_to_lab(probe)))

    print("\nRGB2LMS =\n", RGB2LMS)
    print("RGB2DKL =\n", RGB2DKL)


if __name__ == "__main__":
    main()
