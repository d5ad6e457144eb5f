use ndarray::{Array1, Array2};
use rand::Rng;

use crate::corpus::VeracityLabel;
use crate::emolex::Emotion;

/// Tensor shapes of one model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    /// Embedding rows: vocabulary plus hash buckets.
    pub rows: usize,
    pub embed: usize,
    pub hidden: usize,
    pub attn: usize,
    pub emo: usize,
}

impl Dims {
    /// Width of the classifier input `[evidence pool; emotion pool; claim]`.
    pub fn features(&self) -> usize {
        self.hidden + self.emo + self.embed
    }
}

/// Every trainable tensor. Matrices map column vectors: `y = W x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub embeddings: Array2<f64>,
    pub w_pair: Array2<f64>,
    pub b_pair: Array1<f64>,
    pub w_s: Array2<f64>,
    pub u_s: Array1<f64>,
    pub w_p: Array2<f64>,
    pub w_e: Array2<f64>,
    pub u_e: Array1<f64>,
    pub w_c: Array2<f64>,
    pub b_c: Array1<f64>,
}

pub const TENSOR_NAMES: [&str; 10] = [
    "embeddings",
    "w_pair",
    "b_pair",
    "w_s",
    "u_s",
    "w_p",
    "w_e",
    "u_e",
    "w_c",
    "b_c",
];

fn uniform(rng: &mut impl Rng, shape: (usize, usize), limit: f64) -> Array2<f64> {
    Array2::from_shape_simple_fn(shape, || rng.random_range(-limit..=limit))
}

fn glorot(rng: &mut impl Rng, rows: usize, cols: usize) -> Array2<f64> {
    let limit = (6.0 / (rows + cols) as f64).sqrt();
    uniform(rng, (rows, cols), limit)
}

impl Params {
    pub fn zeros(d: Dims) -> Self {
        let classes = VeracityLabel::COUNT;
        Params {
            embeddings: Array2::zeros((d.rows, d.embed)),
            w_pair: Array2::zeros((d.hidden, 3 * d.embed)),
            b_pair: Array1::zeros(d.hidden),
            w_s: Array2::zeros((d.attn, d.hidden)),
            u_s: Array1::zeros(d.attn),
            w_p: Array2::zeros((d.emo, Emotion::COUNT)),
            w_e: Array2::zeros((d.attn, d.emo)),
            u_e: Array1::zeros(d.attn),
            w_c: Array2::zeros((classes, d.features())),
            b_c: Array1::zeros(classes),
        }
    }

    /// Glorot-uniform matrices and context vectors, small uniform
    /// embeddings, zero biases. Draw order is fixed.
    pub fn init(d: Dims, rng: &mut impl Rng) -> Self {
        let classes = VeracityLabel::COUNT;
        let embeddings = uniform(rng, (d.rows, d.embed), 0.1);
        let w_pair = glorot(rng, d.hidden, 3 * d.embed);
        let w_s = glorot(rng, d.attn, d.hidden);
        let u_s = glorot(rng, d.attn, 1)
            .into_shape_with_order(d.attn)
            .expect("column");
        let w_p = glorot(rng, d.emo, Emotion::COUNT);
        let w_e = glorot(rng, d.attn, d.emo);
        let u_e = glorot(rng, d.attn, 1)
            .into_shape_with_order(d.attn)
            .expect("column");
        let w_c = glorot(rng, classes, d.features());
        Params {
            embeddings,
            w_pair,
            b_pair: Array1::zeros(d.hidden),
            w_s,
            u_s,
            w_p,
            w_e,
            u_e,
            w_c,
            b_c: Array1::zeros(classes),
        }
    }

    pub fn dims(&self) -> Dims {
        Dims {
            rows: self.embeddings.nrows(),
            embed: self.embeddings.ncols(),
            hidden: self.w_pair.nrows(),
            attn: self.w_s.nrows(),
            emo: self.w_p.nrows(),
        }
    }

    /// Shapes in [`TENSOR_NAMES`] order.
    pub fn shapes(&self) -> [Vec<usize>; 10] {
        [
            self.embeddings.shape().to_vec(),
            self.w_pair.shape().to_vec(),
            self.b_pair.shape().to_vec(),
            self.w_s.shape().to_vec(),
            self.u_s.shape().to_vec(),
            self.w_p.shape().to_vec(),
            self.w_e.shape().to_vec(),
            self.u_e.shape().to_vec(),
            self.w_c.shape().to_vec(),
            self.b_c.shape().to_vec(),
        ]
    }

    /// Row-major views in [`TENSOR_NAMES`] order.
    pub fn slices(&self) -> [&[f64]; 10] {
        let s = "parameters are kept in standard layout";
        [
            self.embeddings.as_slice().expect(s),
            self.w_pair.as_slice().expect(s),
            self.b_pair.as_slice().expect(s),
            self.w_s.as_slice().expect(s),
            self.u_s.as_slice().expect(s),
            self.w_p.as_slice().expect(s),
            self.w_e.as_slice().expect(s),
            self.u_e.as_slice().expect(s),
            self.w_c.as_slice().expect(s),
            self.b_c.as_slice().expect(s),
        ]
    }

    pub fn slices_mut(&mut self) -> [&mut [f64]; 10] {
        let s = "parameters are kept in standard layout";
        [
            self.embeddings.as_slice_mut().expect(s),
            self.w_pair.as_slice_mut().expect(s),
            self.b_pair.as_slice_mut().expect(s),
            self.w_s.as_slice_mut().expect(s),
            self.u_s.as_slice_mut().expect(s),
            self.w_p.as_slice_mut().expect(s),
            self.w_e.as_slice_mut().expect(s),
            self.u_e.as_slice_mut().expect(s),
            self.w_c.as_slice_mut().expect(s),
            self.b_c.as_slice_mut().expect(s),
        ]
    }

    pub fn squared_norm(&self) -> f64 {
        self.slices()
            .iter()
            .flat_map(|s| s.iter())
            .map(|x| x * x)
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.slices()
            .iter()
            .all(|s| s.iter().all(|x| x.is_finite()))
    }

    pub fn fill_zero(&mut self) {
        for s in self.slices_mut() {
            s.fill(0.0);
        }
    }

    /// `self += scale * other`, tensor by tensor.
    pub fn add_scaled(&mut self, other: &Params, scale: f64) {
        for (a, b) in self.slices_mut().into_iter().zip(other.slices()) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += scale * y;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dims() -> Dims {
        Dims {
            rows: 5,
            embed: 4,
            hidden: 3,
            attn: 2,
            emo: 2,
        }
    }

    #[test]
    fn seeded_init_is_reproducible() {
        let a = Params::init(dims(), &mut ChaCha8Rng::seed_from_u64(3));
        let b = Params::init(dims(), &mut ChaCha8Rng::seed_from_u64(3));
        let c = Params::init(dims(), &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.is_finite());
        assert_eq!(a.dims(), dims());
    }

    #[test]
    fn shapes_follow_dims() {
        let p = Params::zeros(dims());
        let shapes = p.shapes();
        assert_eq!(shapes[0], [5, 4]);
        assert_eq!(shapes[1], [3, 12]);
        assert_eq!(shapes[5], [2, 8]);
        assert_eq!(shapes[8], [3, 3 + 2 + 4]);
        for (shape, slice) in shapes.iter().zip(p.slices()) {
            assert_eq!(shape.iter().product::<usize>(), slice.len());
        }
    }
}
