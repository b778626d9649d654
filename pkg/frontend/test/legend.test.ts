import { describe, expect, it } from "vitest";

import { highlightFor, legendModel } from "../src/legend.js";
import { rgbCss } from "../src/types.js";
import { recordedLayerR1, recordedMeta } from "./helpers.js";

const meta = recordedMeta();

describe("legendModel from recorded meta", () => {
    const model = legendModel(meta);

    it("shows exactly bins_per_tier swatches per tier", () => {
        expect(model.tiers.length).toBe(meta.encoding.palette.tiers);
        model.tiers.forEach((tier, t) => {
            expect(tier.colors.length).toBe(meta.encoding.palette.bins_per_tier[t]);
        });
    });

    it("uses the palette colors verbatim", () => {
        model.tiers.forEach((tier, t) => {
            expect(tier.colors).toEqual(
                meta.encoding.palette.colors[t].map((c) => rgbCss(c)),
            );
        });
    });

    it("labels tiers with descending confidence bands", () => {
        const bands = model.tiers.map((t) => [t.confidenceMin, t.confidenceMax]);
        expect(bands[0][1]).toBe(1);
        expect(bands[bands.length - 1][0]).toBe(0);
        for (let i = 1; i < bands.length; i++) {
            expect(bands[i][1]).toBeCloseTo(bands[i - 1][0], 12);
        }
    });

    it("names the channel variables from the encoding", () => {
        expect(model.baseVariable.name).toBe(meta.encoding.base_color_variable);
        expect(model.ringVariable.name).toBe(meta.encoding.inner_ring_variable);
        expect(model.iconVariable.name).toBe(meta.encoding.icon_variable);
        expect(model.iconUnit).toBe(meta.encoding.icon_unit);
    });

    it("highlights the hovered tile's tier and bin", () => {
        const tile = recordedLayerR1().tiles.find((t) => t.base !== null)!;
        const hl = highlightFor(tile)!;
        expect(hl.tier).toBe(tile.base!.tier);
        expect(hl.bin).toBe(tile.base!.bin);
        expect(hl.bin).toBeLessThan(meta.encoding.palette.bins_per_tier[hl.tier]);
        expect(highlightFor({ base: null })).toBeNull();
    });
});
