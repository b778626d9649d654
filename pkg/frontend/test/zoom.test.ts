import { describe, expect, it } from "vitest";

import { resolutionForZoom } from "../src/zoom.js";
import { recordedMeta } from "./helpers.js";

describe("resolutionForZoom", () => {
    const meta = recordedMeta(); // resolutions [1,3], z0 5.0, delta 1.5

    it("maps z0 to the coarsest resolution", () => {
        expect(resolutionForZoom(meta.zoom_policy.z0, meta)).toBe(meta.resolutions[0]);
    });

    it("increments exactly when a band boundary is crossed", () => {
        const { z0, delta } = meta.zoom_policy;
        expect(resolutionForZoom(z0 + delta - 0.01, meta)).toBe(1);
        expect(resolutionForZoom(z0 + delta, meta)).toBe(2);
        expect(resolutionForZoom(z0 + 2 * delta - 0.01, meta)).toBe(2);
        expect(resolutionForZoom(z0 + 2 * delta, meta)).toBe(3);
    });

    it("clamps outside the compiled range", () => {
        expect(resolutionForZoom(-10, meta)).toBe(meta.resolutions[0]);
        expect(resolutionForZoom(40, meta)).toBe(meta.resolutions[1]);
    });

    it("matches the clamped formula over a sweep", () => {
        const [rMin, rMax] = meta.resolutions;
        const { z0, delta } = meta.zoom_policy;
        for (let i = 0; i < 40; i++) {
            const z = 2 + i * 0.37;
            const want = Math.min(rMax, Math.max(rMin, rMin + Math.floor((z - z0) / delta)));
            expect(resolutionForZoom(z, meta)).toBe(want);
        }
    });
});
