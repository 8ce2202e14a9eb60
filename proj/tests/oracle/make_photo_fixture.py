#!/usr/bin/env python3
"""Builds tests/data/photos: 24 natural-photo tiles (PNG, 128x128) cut from
scikit-image's bundled sample photographs (public-domain / CC0 sources).
Also sanity-checks the decorrelation ordering the stats command is expected
to reproduce: mean |r| over RGB channel pairs > mean |r| over L*a*b* pairs.
"""

import os
import numpy as np
from PIL import Image
import skimage.data as data
from colourimetry_reference import srgb_decode, rgb_to_lab

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "photos")
TILE = 128

SOURCES = ["astronaut", "chelsea", "coffee", "rocket", "retina", "immunohistochemistry"]


def tiles_from(img, n=4):
    h, w = img.shape[:2]
    ys = [0, h - TILE]
    xs = [0, w - TILE]
    out = []
    for y in ys:
        for x in xs:
            out.append(img[y:y + TILE, x:x + TILE, :3])
            if len(out) == n:
                return out
    return out


def main():
    os.makedirs(OUT, exist_ok=True)
    count = 0
    tiles = []
    for name in SOURCES:
        img = getattr(data, name)()
        for i, t in enumerate(tiles_from(img)):
            path = os.path.join(OUT, f"{name}_{i}.png")
            Image.fromarray(t).save(path)
            tiles.append(t)
            count += 1
    print(f"wrote {count} tiles to {OUT}")

    # decorrelation sanity check with an independent sampler (100 px per tile)
    rng = np.random.default_rng(424242)
    rgb_samples, lab_samples = [], []
    for t in tiles:
        idx = rng.integers(0, TILE * TILE, size=100)
        px = t.reshape(-1, 3)[idx] / 255.0
        rgb_samples.append(px)
        lab_samples.append(np.stack([rgb_to_lab(srgb_decode(p)) for p in px]))
    rgb = np.concatenate(rgb_samples)
    lab = np.concatenate(lab_samples)

    def pair_r(m):
        c = np.corrcoef(m.T)
        return np.array([c[0, 1], c[0, 2], c[1, 2]])

    r_rgb = pair_r(rgb)
    r_lab = pair_r(lab)
    print("RGB pair r :", np.round(r_rgb, 3), " mean|r| =", np.abs(r_rgb).mean().round(3))
    print("Lab pair r :", np.round(r_lab, 3), " mean|r| =", np.abs(r_lab).mean().round(3))
    assert np.abs(r_rgb).mean() > np.abs(r_lab).mean(), "fixture does not decorrelate"
    print("ordering holds")


if __name__ == "__main__":
    main()
