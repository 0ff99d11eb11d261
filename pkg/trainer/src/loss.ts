/** Multitask loss: smooth L1 on the four regression targets plus
 * gamma-weighted binary cross-entropy on the ingredient logits.
 *
 * The scalar forms here mirror the reference implementation exactly so the
 * per-batch values can be cross-checked against it; `multitaskLossTensor`
 * is the same computation expressed in tfjs ops for training.
 */
import * as tf from "@tensorflow/tfjs";

export interface RegressionTarget {
  kcal: number;
  fat: number;
  protein: number;
  carbs: number;
}

export interface Sample {
  pred: RegressionTarget & { logits: number[] };
  target: RegressionTarget & { label: number[] };
}

export function smoothL1(pred: number, target: number, beta: number): number {
  const d = Math.abs(pred - target);
  return d < beta ? (0.5 * d * d) / beta : d - 0.5 * beta;
}

/** Numerically stable BCE with logits, averaged over positions. */
export function bce(logits: number[], labels: number[]): number {
  if (logits.length !== labels.length) {
    throw new Error(`length mismatch: ${logits.length} vs ${labels.length}`);
  }
  let sum = 0;
  for (let i = 0; i < logits.length; i++) {
    const z = logits[i];
    sum += Math.max(z, 0) - z * labels[i] + Math.log1p(Math.exp(-Math.abs(z)));
  }
  return sum / logits.length;
}

export function multitaskLoss(sample: Sample, gamma: number, beta = 1.0): number {
  const { pred, target } = sample;
  return (
    smoothL1(pred.kcal, target.kcal, beta) +
    smoothL1(pred.fat, target.fat, beta) +
    smoothL1(pred.protein, target.protein, beta) +
    smoothL1(pred.carbs, target.carbs, beta) +
    gamma * bce(pred.logits, target.label)
  );
}

/** Mean of per-sample totals. */
export function batchLoss(samples: Sample[], gamma: number, beta = 1.0): number {
  if (samples.length === 0) throw new Error("empty batch");
  let sum = 0;
  for (const s of samples) sum += multitaskLoss(s, gamma, beta);
  return sum / samples.length;
}

/** Same loss over tensors: regression/logits are [batch, 4] and [batch, n],
 * targets likewise. Returns a scalar. */
export function multitaskLossTensor(
  regression: tf.Tensor2D,
  logits: tf.Tensor2D,
  regressionTarget: tf.Tensor2D,
  labels: tf.Tensor2D,
  gamma: number,
  beta = 1.0,
): tf.Scalar {
  return tf.tidy(() => {
    // smooth L1 via min(d, beta): 0.5*min(d,beta)^2/beta + (d - min(d,beta))
    // equals 0.5*d^2/beta below beta and d - 0.5*beta above, and keeps the
    // whole expression differentiable (boolean select has no gradient)
    const d = tf.abs(tf.sub(regression, regressionTarget));
    const q = tf.minimum(d, beta);
    const l1 = tf.add(tf.div(tf.mul(tf.square(q), 0.5), beta), tf.sub(d, q)).sum(1);
    const z = logits;
    const perPos = tf.add(
      tf.sub(tf.maximum(z, 0), tf.mul(z, labels)),
      tf.log1p(tf.exp(tf.neg(tf.abs(z)))),
    );
    const bceMean = perPos.mean(1); // [batch]
    return tf.add(l1, tf.mul(bceMean, gamma)).mean() as tf.Scalar;
  });
}
