//! Exhaustive models of modules `(Z/n)^g / span(rows)`.

use std::collections::{HashMap, HashSet, VecDeque};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn reduce(n: u64, v: &[i64]) -> Vec<u64> {
    v.iter().map(|&x| x.rem_euclid(n as i64) as u64).collect()
}

fn all_vectors(n: u64, g: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..g {
        out = out.into_iter().flat_map(|v| (0..n).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    pub n: u64,
    pub g: usize,
    pub rows: Vec<Vec<u64>>,
    sub: HashSet<Vec<u64>>,
    reps: Vec<Vec<u64>>,
    class: HashMap<Vec<u64>, usize>,
}

impl FiniteQuotient {
    pub fn new(n: u64, g: usize, relations: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<u64>> = relations.iter().map(|r| reduce(n, r)).collect();
        let zero = vec![0; g];
        let mut sub = HashSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(v) = queue.pop_front() {
            for r in &rows {
                let w: Vec<u64> = v.iter().zip(r).map(|(a, b)| (a + b) % n).collect();
                if sub.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        let mut reps = Vec::new();
        let mut class = HashMap::new();
        for v in all_vectors(n, g) {
            if class.contains_key(&v) {
                continue;
            }
            let idx = reps.len();
            for s in &sub {
                let w: Vec<u64> = v.iter().zip(s).map(|(a, b)| (a + b) % n).collect();
                class.insert(w, idx);
            }
            reps.push(v);
        }
        FiniteQuotient { n, g, rows, sub, reps, class }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Vec<u64>] {
        &self.reps
    }

    pub fn class_of(&self, v: &[u64]) -> usize {
        self.class[&v.iter().map(|x| x % self.n).collect::<Vec<_>>()]
    }

    pub fn is_zero(&self, v: &[u64]) -> bool {
        self.sub.contains(&v.iter().map(|x| x % self.n).collect::<Vec<_>>())
    }

    pub fn same(&self, a: &[i64], b: &[i64]) -> bool {
        let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero(&reduce(self.n, &d))
    }

    fn scale(&self, k: u64, v: &[u64]) -> Vec<u64> {
        v.iter().map(|x| (k * x) % self.n).collect()
    }

    /// `|G[k]|` for `k = 1..=n`.
    pub fn profile(&self) -> Vec<usize> {
        (1..=self.n).map(|k| self.reps.iter().filter(|x| self.is_zero(&self.scale(k, x))).count()).collect()
    }
}

/// `|G[k]|` for `k = 1..=n` with `G = (Z/n)^free ⊕ ⊕ Z/d`.
pub fn cyclic_profile(n: u64, free: usize, factors: &[u64]) -> Vec<usize> {
    (1..=n)
        .map(|k| {
            let f: u64 = factors.iter().map(|&d| gcd(k, d)).product();
            (f * gcd(k, n).pow(free as u32)) as usize
        })
        .collect()
}

fn apply(n: u64, x: &[u64], f: &[Vec<u64>]) -> Vec<u64> {
    let cols = f.first().map_or(0, Vec::len);
    (0..cols).map(|j| x.iter().zip(f).map(|(a, row)| a * row[j]).sum::<u64>() % n).collect()
}

/// Every tuple of generator images that respects the relations of `m`.
pub fn homs(m: &FiniteQuotient, t: &FiniteQuotient) -> Vec<Vec<Vec<u64>>> {
    let mut tuples: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for _ in 0..m.g {
        tuples = tuples
            .into_iter()
            .flat_map(|tp| t.reps.iter().map(move |y| [tp.clone(), vec![y.clone()]].concat()))
            .collect();
    }
    tuples.into_iter().filter(|phi| m.rows.iter().all(|r| t.is_zero(&apply(t.n, r, phi)))).collect()
}

/// `|Hom(M, N)[k]|` for `k = 1..=n`.
pub fn hom_profile(m: &FiniteQuotient, t: &FiniteQuotient) -> Vec<usize> {
    let all = homs(m, t);
    (1..=m.n).map(|k| all.iter().filter(|phi| phi.iter().all(|y| t.is_zero(&t.scale(k, y)))).count()).collect()
}

/// Bilinear maps `M × N -> Z/k` for `k | n`; this is `|(M ⊗ N) / k|`.
pub fn bilinear_count(m: &FiniteQuotient, t: &FiniteQuotient, k: u64) -> usize {
    assert_eq!(m.n % k, 0, "k must divide n");
    let cells = m.g * t.g;
    let mut count = 0;
    for flat in all_vectors(k, cells) {
        let b: Vec<Vec<u64>> = flat.chunks(t.g.max(1)).map(<[u64]>::to_vec).take(m.g).collect();
        let left =
            m.rows.iter().all(|r| (0..t.g).all(|j| r.iter().zip(&b).map(|(a, row)| a * row[j]).sum::<u64>() % k == 0));
        let right =
            t.rows.iter().all(|s| b.iter().all(|row| row.iter().zip(s).map(|(a, c)| a * c).sum::<u64>() % k == 0));
        if left && right {
            count += 1;
        }
    }
    count
}

/// `|(M ⊗ N)[k]|` for `k = 1..=n`.
pub fn tensor_profile(m: &FiniteQuotient, t: &FiniteQuotient) -> Vec<usize> {
    let counts: HashMap<u64, usize> =
        (1..=m.n).filter(|k| m.n.is_multiple_of(*k)).map(|k| (k, bilinear_count(m, t, k))).collect();
    (1..=m.n).map(|k| counts[&gcd(k, m.n)]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismProfiles {
    pub well_defined: bool,
    pub kernel: Vec<usize>,
    pub image: Vec<usize>,
    pub cokernel: Vec<usize>,
}

/// Profiles of kernel, image and cokernel of `x ↦ x · f`.
pub fn morphism_profiles(m: &FiniteQuotient, t: &FiniteQuotient, f: &[Vec<i64>]) -> MorphismProfiles {
    let n = m.n;
    let fm: Vec<Vec<u64>> = f.iter().map(|r| reduce(n, r)).collect();
    let well_defined = m.rows.iter().all(|r| t.is_zero(&apply(n, r, &fm)));
    let mut image: HashSet<usize> = HashSet::new();
    let mut kernel = vec![0; n as usize];
    for x in &m.reps {
        let y = apply(n, x, &fm);
        image.insert(t.class_of(&y));
        if t.is_zero(&y) {
            for k in 1..=n {
                if m.is_zero(&m.scale(k, x)) {
                    kernel[k as usize - 1] += 1;
                }
            }
        }
    }
    let image_profile =
        (1..=n).map(|k| image.iter().filter(|&&c| t.is_zero(&t.scale(k, &t.reps[c]))).count()).collect();
    let mut coker_rows: Vec<Vec<i64>> = t.rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    coker_rows.extend(f.iter().cloned());
    let cokernel = FiniteQuotient::new(n, t.g, &coker_rows).profile();
    MorphismProfiles { well_defined, kernel, image: image_profile, cokernel }
}
