/**
 * Constraint side-panel state: the settings document under edit, per-field
 * lock toggles, and a dirty flag.
 *
 * Locked fields reject edits outright; the generate request body therefore
 * always carries locked values unchanged. Importing a settings file
 * replaces the whole panel (including locks), which is what makes
 * import -> export byte-fidelity possible.
 */

import {
  FIELD_ORDER,
  FieldName,
  SettingsDocument,
  ValidationIssue,
  emptyDocument,
  parseSettings,
  serializeSettings,
  validateDocument,
} from "./settings.js";

type FieldValue = SettingsDocument[FieldName];

export class PanelState {
  private doc: SettingsDocument = emptyDocument();
  dirty = false;

  get document(): SettingsDocument {
    return structuredClone(this.doc);
  }

  value(field: FieldName): FieldValue {
    return structuredClone(this.doc[field]) as FieldValue;
  }

  isLocked(field: FieldName): boolean {
    return this.doc.locks.includes(field);
  }

  /** Attempt an edit; returns false (and changes nothing) when locked. */
  setField(field: FieldName, value: FieldValue): boolean {
    if (!FIELD_ORDER.includes(field)) {
      throw new Error(`no such field: ${field}`);
    }
    if (this.isLocked(field)) {
      return false;
    }
    (this.doc as unknown as Record<string, unknown>)[field] = structuredClone(value);
    this.dirty = true;
    return true;
  }

  toggleLock(field: FieldName): boolean {
    if (this.isLocked(field)) {
      this.doc.locks = this.doc.locks.filter((f) => f !== field);
    } else {
      this.doc.locks = FIELD_ORDER.filter(
        (f) => f === field || this.doc.locks.includes(f));
    }
    this.dirty = true;
    return this.isLocked(field);
  }

  validate(): ValidationIssue[] {
    return validateDocument(this.doc);
  }

  /** Replace the panel from a settings file (locks included). */
  loadDocument(text: string): void {
    this.doc = parseSettings(text);
    this.dirty = false;
  }

  /** Canonical bytes for Export Settings. */
  exportDocument(): string {
    return serializeSettings(this.doc);
  }

  /** Body for POST /designs:generate. */
  toRequestSettings(): SettingsDocument {
    return this.document;
  }
}
