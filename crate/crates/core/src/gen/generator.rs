use super::rng::{Rng, Seed};
use super::GenError;
use std::sync::Arc;

/// A pure function from a random state to a value and the advanced state.
pub struct Generator<T> {
    run: Arc<dyn Fn(Rng) -> (T, Rng) + Send + Sync>,
}

impl<T> Clone for Generator<T> {
    fn clone(&self) -> Self {
        Generator { run: Arc::clone(&self.run) }
    }
}

impl<T: 'static> Generator<T> {
    pub fn new(run: impl Fn(Rng) -> (T, Rng) + Send + Sync + 'static) -> Self {
        Generator { run: Arc::new(run) }
    }

    pub fn generate(&self, rng: Rng) -> (T, Rng) {
        (self.run)(rng)
    }

    pub fn sample(&self, seed: Seed) -> T {
        self.generate(Rng::from_seed(seed)).0
    }

    /// The first `n` values of one stream.
    pub fn take(&self, rng: Rng, n: usize) -> (Vec<T>, Rng) {
        let mut rng = rng;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let (v, next) = self.generate(rng);
            out.push(v);
            rng = next;
        }
        (out, rng)
    }

    pub fn map<U: 'static>(&self, f: impl Fn(T) -> U + Send + Sync + 'static) -> Generator<U> {
        let inner = self.clone();
        Generator::new(move |rng| {
            let (v, rng) = inner.generate(rng);
            (f(v), rng)
        })
    }

    pub fn bind<U: 'static>(&self, f: impl Fn(T) -> Generator<U> + Send + Sync + 'static) -> Generator<U> {
        let inner = self.clone();
        Generator::new(move |rng| {
            let (v, rng) = inner.generate(rng);
            f(v).generate(rng)
        })
    }

    pub fn zip<U: 'static>(&self, other: &Generator<U>) -> Generator<(T, U)> {
        let (a, b) = (self.clone(), other.clone());
        Generator::new(move |rng| {
            let (x, rng) = a.generate(rng);
            let (y, rng) = b.generate(rng);
            ((x, y), rng)
        })
    }
}

pub fn constant<T: Clone + Send + Sync + 'static>(value: T) -> Generator<T> {
    Generator::new(move |rng| (value.clone(), rng))
}

/// Uniform over all `i64`.
pub fn gen_int() -> Generator<i64> {
    Generator::new(|rng| {
        let (x, rng) = rng.next_u64();
        (x as i64, rng)
    })
}

/// Uniform over `lo..=hi`.
pub fn gen_int_in_range(lo: i64, hi: i64) -> Result<Generator<i64>, GenError> {
    if lo > hi {
        return Err(GenError::InvalidRange { lo, hi });
    }
    Ok(Generator::new(move |rng| rng.next_in_range(lo, hi)))
}

pub fn gen_bool() -> Generator<bool> {
    gen_int().map(|v| v >= 0)
}

pub fn gen_string() -> Generator<String> {
    gen_int().map(|v| v.to_string())
}

/// Uniform choice from a nonempty list.
pub fn one_of<T: Clone + Send + Sync + 'static>(choices: Vec<T>) -> Result<Generator<T>, GenError> {
    if choices.is_empty() {
        return Err(GenError::NoChoices);
    }
    let last = choices.len() as i64 - 1;
    Ok(Generator::new(move |rng| {
        let (i, rng) = rng.next_in_range(0, last);
        (choices[i as usize].clone(), rng)
    }))
}

/// Picks a generator with probability proportional to its weight.
pub fn frequency<T: 'static>(weighted: Vec<(u32, Generator<T>)>) -> Result<Generator<T>, GenError> {
    if weighted.is_empty() {
        return Err(GenError::NoChoices);
    }
    if weighted.iter().any(|(w, _)| *w == 0) {
        return Err(GenError::ZeroWeight);
    }
    let total: i64 = weighted.iter().map(|(w, _)| *w as i64).sum();
    Ok(Generator::new(move |rng| {
        let (mut pick, rng) = rng.next_in_range(0, total - 1);
        for (w, g) in &weighted {
            if pick < *w as i64 {
                return g.generate(rng);
            }
            pick -= *w as i64;
        }
        unreachable!("pick is below the total weight")
    }))
}

/// A vector whose length is drawn from `len`, then filled element by element.
pub fn vec_of<T: 'static>(len: Generator<usize>, elem: Generator<T>) -> Generator<Vec<T>> {
    Generator::new(move |rng| {
        let (n, rng) = len.generate(rng);
        elem.take(rng, n)
    })
}
