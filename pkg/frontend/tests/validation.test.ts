import { describe, expect, it } from "vitest";

import { parseNumericInput, validateSoil } from "../src/validation.js";

const GOOD = {
  n: 90, p: 42, k: 43, temperature: 20.8, humidity: 82, ph: 6.5, rainfall: 202.9,
};

describe("validateSoil", () => {
  it("accepts a typical sample", () => {
    expect(validateSoil(GOOD)).toEqual([]);
  });

  it("rejects ph above 14 with the service's wording", () => {
    const issues = validateSoil({ ...GOOD, ph: 20 });
    expect(issues).toEqual([{ field: "ph", message: "ph out of [0,14]" }]);
  });

  it("rejects negative ph", () => {
    expect(validateSoil({ ...GOOD, ph: -1 })).toEqual([
      { field: "ph", message: "ph out of [0,14]" },
    ]);
  });

  it("accepts the closed humidity boundary", () => {
    expect(validateSoil({ ...GOOD, humidity: 100 })).toEqual([]);
    expect(validateSoil({ ...GOOD, humidity: 0 })).toEqual([]);
  });

  it("rejects humidity above 100", () => {
    expect(validateSoil({ ...GOOD, humidity: 100.5 })).toEqual([
      { field: "humidity", message: "humidity out of [0,100]" },
    ]);
  });

  it("rejects negative nutrient and rainfall values", () => {
    const issues = validateSoil({ ...GOOD, n: -3, rainfall: -1 });
    expect(issues.map((i) => i.field).sort()).toEqual(["n", "rainfall"]);
  });

  it("flags missing fields", () => {
    const issues = validateSoil({ ...GOOD, k: undefined });
    expect(issues).toEqual([{ field: "k", message: "k is required" }]);
  });

  it("collects multiple issues at once", () => {
    const issues = validateSoil({ ...GOOD, ph: 99, humidity: -5, p: -1 });
    expect(issues).toHaveLength(3);
  });
});

describe("parseNumericInput", () => {
  it("parses decimals", () => {
    expect(parseNumericInput(" 6.5 ")).toBe(6.5);
  });

  it("returns NaN for empty or junk", () => {
    expect(Number.isNaN(parseNumericInput(""))).toBe(true);
    expect(Number.isNaN(parseNumericInput("abc"))).toBe(true);
  });
});
