/**
 * Client-side soil validation mirroring the service's domain bounds, so the
 * form can flag bad fields inline before any request is sent. The service
 * remains the authority; these checks just mirror its published rules.
 */
const NON_NEGATIVE = ["n", "p", "k", "rainfall"];
export function validateSoil(form) {
    const issues = [];
    const fields = [
        "n", "p", "k", "temperature", "humidity", "ph", "rainfall",
    ];
    for (const field of fields) {
        const value = form[field];
        if (value === undefined || Number.isNaN(value)) {
            issues.push({ field, message: `${field} is required` });
            continue;
        }
        if (!Number.isFinite(value)) {
            issues.push({ field, message: `${field} is not finite` });
            continue;
        }
        if (NON_NEGATIVE.includes(field) && value < 0) {
            issues.push({ field, message: `${field} must be >= 0` });
        }
        else if (field === "humidity" && (value < 0 || value > 100)) {
            issues.push({ field, message: "humidity out of [0,100]" });
        }
        else if (field === "ph" && (value < 0 || value > 14)) {
            issues.push({ field, message: "ph out of [0,14]" });
        }
    }
    return issues;
}
export function parseNumericInput(raw) {
    const trimmed = raw.trim();
    if (trimmed === "")
        return Number.NaN;
    return Number(trimmed);
}
