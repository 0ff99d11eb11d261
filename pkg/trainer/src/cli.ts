/** Export embeddings for a list of names (one per line) in the matcher's
 * file format: `node dist/cli.js export-embeddings names.txt out.txt [dim]`.
 */
import * as fs from "fs";
import { DEFAULT_DIM, writeEmbeddingFile } from "./embeddings";

function main(argv: string[]): number {
  const [command, namesPath, outPath, dimArg] = argv;
  if (command !== "export-embeddings" || !namesPath || !outPath) {
    console.error(
      "usage: cli.js export-embeddings <names-file> <out-file> [dim]",
    );
    return 1;
  }
  const dim = dimArg ? Number(dimArg) : DEFAULT_DIM;
  if (!Number.isInteger(dim) || dim <= 0) {
    console.error(`invalid dimension: ${dimArg}`);
    return 1;
  }
  const names = fs
    .readFileSync(namesPath, "utf-8")
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  const keys = writeEmbeddingFile(outPath, names, dim);
  console.log(`wrote ${keys.length} embeddings (dim ${dim}) to ${outPath}`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
