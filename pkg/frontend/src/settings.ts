/**
 * Settings document codec.
 *
 * Mirrors the server's canonical form byte-for-byte: fixed key order,
 * two-space indentation, trailing newline, colors normalized to uppercase
 * 6-digit hex. Import -> form state -> export must reproduce a canonical
 * file exactly, so serialization lives here and nowhere else.
 */

export type Device = "Desktop" | "Mobile" | "Tablet";

export const DEVICES: Device[] = ["Desktop", "Mobile", "Tablet"];
export const STYLES = ["3D", "Neumorphism", "Dark Mode", "Minimalism"] as const;
export const DESIGN_THEMES = [
  "MaterialDesign", "AppleDesign", "CarbonDesign", "AtlassianDesign",
] as const;

export const MAX_COLORS = 5;
export const MAX_FONTS = 3;

/** Lockable fields, in canonical serialization order. */
export const FIELD_ORDER = [
  "industry", "product_purpose", "target_audience", "device", "screen_type",
  "colors", "fonts", "style", "design_theme", "logo", "features_text",
] as const;

export type FieldName = (typeof FIELD_ORDER)[number];

export interface SettingsDocument {
  schema_version: number;
  industry: string;
  product_purpose: string;
  target_audience: string;
  device: Device;
  screen_type: string;
  colors: string[];
  fonts: string[];
  style: string | null;
  design_theme: string | null;
  logo: string | null;
  features_text: string;
  locks: FieldName[];
}

export interface ValidationIssue {
  field: string;
  code: "out-of-range" | "malformed-color" | "unknown-enum-value" | "unknown-lock-target";
  message: string;
}

const HEX_RE = /^#([0-9a-fA-F]{3}|[0-9a-fA-F]{6})$/;

export function normalizeHex(color: string): string {
  const m = HEX_RE.exec(color);
  if (!m) return color;
  let digits = m[1];
  if (digits.length === 3) {
    digits = digits.split("").map((ch) => ch + ch).join("");
  }
  return "#" + digits.toUpperCase();
}

export function emptyDocument(): SettingsDocument {
  return {
    schema_version: 1,
    industry: "",
    product_purpose: "",
    target_audience: "",
    device: "Desktop",
    screen_type: "",
    colors: [],
    fonts: [],
    style: null,
    design_theme: null,
    logo: null,
    features_text: "",
    locks: [],
  };
}

/** Client-side mirror of the server rules, for inline form feedback only;
 * the server remains the source of truth. */
export function validateDocument(doc: SettingsDocument): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  if (doc.colors.length > MAX_COLORS) {
    issues.push({ field: "colors", code: "out-of-range",
                  message: `at most ${MAX_COLORS} colors allowed` });
  }
  for (const color of doc.colors) {
    if (!HEX_RE.test(color)) {
      issues.push({ field: "colors", code: "malformed-color",
                    message: `${color} is not a hex code` });
    }
  }
  if (doc.fonts.length > MAX_FONTS) {
    issues.push({ field: "fonts", code: "out-of-range",
                  message: `at most ${MAX_FONTS} fonts allowed` });
  }
  for (const font of doc.fonts) {
    if (!font.trim()) {
      issues.push({ field: "fonts", code: "out-of-range",
                    message: "font names must be non-empty" });
    }
  }
  if (!DEVICES.includes(doc.device)) {
    issues.push({ field: "device", code: "unknown-enum-value",
                  message: `unknown device ${doc.device}` });
  }
  if (doc.style !== null && !(STYLES as readonly string[]).includes(doc.style)) {
    issues.push({ field: "style", code: "unknown-enum-value",
                  message: `unknown style ${doc.style}` });
  }
  if (doc.design_theme !== null
      && !(DESIGN_THEMES as readonly string[]).includes(doc.design_theme)) {
    issues.push({ field: "design_theme", code: "unknown-enum-value",
                  message: `unknown design theme ${doc.design_theme}` });
  }
  for (const lock of doc.locks) {
    if (!(FIELD_ORDER as readonly string[]).includes(lock)) {
      issues.push({ field: "locks", code: "unknown-lock-target",
                    message: `no such field: ${lock}` });
    }
  }
  return issues;
}

/** Serialize to the canonical byte form shared with the server. */
export function serializeSettings(doc: SettingsDocument): string {
  const ordered = {
    schema_version: doc.schema_version,
    industry: doc.industry,
    product_purpose: doc.product_purpose,
    target_audience: doc.target_audience,
    device: doc.device,
    screen_type: doc.screen_type,
    colors: doc.colors.map(normalizeHex),
    fonts: [...doc.fonts],
    style: doc.style,
    design_theme: doc.design_theme,
    logo: doc.logo,
    features_text: doc.features_text,
    locks: FIELD_ORDER.filter((f) => doc.locks.includes(f)),
  };
  return JSON.stringify(ordered, null, 2) + "\n";
}

/** Parse a settings file. Unknown top-level keys are ignored. */
export function parseSettings(text: string): SettingsDocument {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new Error(`settings file is not valid JSON: ${(err as Error).message}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new Error("settings document must be a JSON object");
  }
  const data = raw as Record<string, unknown>;
  const doc = emptyDocument();

  const str = (key: string, fallback: string): string => {
    const value = data[key];
    return typeof value === "string" ? value : fallback;
  };
  const strOrNull = (key: string): string | null => {
    const value = data[key];
    return typeof value === "string" ? value : null;
  };
  const list = (key: string): string[] => {
    const value = data[key];
    return Array.isArray(value) ? value.filter((v) => typeof v === "string") : [];
  };

  doc.industry = str("industry", "");
  doc.product_purpose = str("product_purpose", "");
  doc.target_audience = str("target_audience", "");
  doc.device = str("device", "Desktop") as Device;
  doc.screen_type = str("screen_type", "");
  doc.colors = list("colors").map(normalizeHex);
  doc.fonts = list("fonts");
  doc.style = strOrNull("style");
  doc.design_theme = strOrNull("design_theme");
  doc.logo = strOrNull("logo");
  doc.features_text = str("features_text", "");
  doc.locks = list("locks") as FieldName[];

  const issues = validateDocument(doc);
  if (issues.length > 0) {
    const summary = issues.map((i) => `${i.field}: ${i.message}`).join("; ");
    throw new Error(`settings document invalid: ${summary}`);
  }
  return doc;
}
