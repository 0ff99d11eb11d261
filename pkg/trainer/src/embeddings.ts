/** Deterministic sentence encoder and matcher-format embedding export.
 *
 * Stands in for a pretrained sentence encoder, which cannot be downloaded
 * here: each text is embedded as the L2-normalized bag of hashed character
 * n-grams (n = 2..4) over the normalized string. The encoding is fully
 * deterministic, texts sharing n-grams get higher cosine similarity, and the
 * output file is readable by the dataset pipeline's embedding matcher.
 */
import * as fs from "fs";

export const DEFAULT_DIM = 512;

/** Mirrors the pipeline's text normalization: NFC, lowercase (with the
 * German sharp s folded to "ss" as casefold does), collapsed whitespace. */
export function normalizeText(text: string): string {
  return text
    .normalize("NFC")
    .toLowerCase()
    .replace(/ß/g, "ss")
    .replace(/\s+/g, " ")
    .trim();
}

/** FNV-1a 32-bit hash. */
function fnv1a(s: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < s.length; i++) {
    h ^= s.charCodeAt(i);
    h = Math.imul(h, 0x01000193) >>> 0;
  }
  return h >>> 0;
}

export function embedText(text: string, dim: number = DEFAULT_DIM): Float64Array {
  const normalized = normalizeText(text);
  const padded = `${normalized}`;
  const vec = new Float64Array(dim);
  for (let n = 2; n <= 4; n++) {
    for (let i = 0; i + n <= padded.length; i++) {
      const gram = padded.slice(i, i + n);
      const h = fnv1a(gram);
      const sign = (h & 1) === 0 ? 1 : -1;
      vec[(h >>> 1) % dim] += sign;
    }
  }
  let norm = 0;
  for (let i = 0; i < dim; i++) norm += vec[i] * vec[i];
  norm = Math.sqrt(norm);
  if (norm === 0) {
    vec[0] = 1; // degenerate input (empty after normalization)
    return vec;
  }
  for (let i = 0; i < dim; i++) vec[i] /= norm;
  return vec;
}

export function cosine(a: Float64Array, b: Float64Array): number {
  let dot = 0;
  for (let i = 0; i < a.length; i++) dot += a[i] * b[i];
  return dot;
}

/** Write embeddings in the matcher's file format:
 * header "<count> <dim>", then one "key\tv0 v1 ..." line per entry.
 * Duplicate keys after normalization keep the first occurrence. */
export function writeEmbeddingFile(
  path: string,
  texts: string[],
  dim: number = DEFAULT_DIM,
): string[] {
  const seen = new Map<string, Float64Array>();
  for (const text of texts) {
    const key = normalizeText(text);
    if (!seen.has(key)) seen.set(key, embedText(text, dim));
  }
  const keys = [...seen.keys()].sort();
  const lines = [`${keys.length} ${dim}`];
  for (const key of keys) {
    const vec = seen.get(key)!;
    const parts = new Array<string>(dim);
    for (let i = 0; i < dim; i++) parts[i] = vec[i].toPrecision(17);
    lines.push(`${key}\t${parts.join(" ")}`);
  }
  fs.writeFileSync(path, lines.join("\n") + "\n", "utf-8");
  return keys;
}

export function readEmbeddingFile(path: string): Map<string, Float64Array> {
  const lines = fs.readFileSync(path, "utf-8").split("\n").filter((l) => l.length > 0);
  const [countStr, dimStr] = lines[0].split(" ");
  const count = Number(countStr);
  const dim = Number(dimStr);
  if (lines.length - 1 !== count) {
    throw new Error(`header declares ${count} entries, found ${lines.length - 1}`);
  }
  const table = new Map<string, Float64Array>();
  for (const line of lines.slice(1)) {
    const tab = line.indexOf("\t");
    const key = line.slice(0, tab);
    const values = line.slice(tab + 1).split(" ").map(Number);
    if (values.length !== dim) {
      throw new Error(`entry "${key}" has ${values.length} values, expected ${dim}`);
    }
    table.set(key, Float64Array.from(values));
  }
  return table;
}
