//! Multigraphs, edge expansion (exact and spectral) and seeded random
//! regular expanders.

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::GapError;

/// Largest vertex count accepted by [`edge_expansion_exact`].
pub const EXACT_EXPANSION_MAX_N: usize = 20;
/// Random graphs up to this size are certified exactly.
const EXACT_CERT_MAX_N: usize = 16;
const EIGEN_TOL: f64 = 1e-9;
const EIGEN_MAX_ITERS: usize = 100_000;
/// Spectral bounds are stored as rationals with this denominator, rounded down.
const SPECTRAL_DENOM: i64 = 1_000_000;

/// Undirected multigraph on vertices `1..=n`; parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GapError> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u == v || u == 0 || v == 0 || u > n || v > n) {
            return Err(GapError::BadEdge(u, v));
        }
        Ok(Multigraph { n, edges })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
        Multigraph { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        let edges = (1..=n).map(|u| (u, u % n + 1)).collect();
        Multigraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u - 1] += 1;
            deg[v - 1] += 1;
        }
        deg
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let d = *deg.first()?;
        deg.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u - 1].push(v - 1);
            adj[v - 1].push(u - 1);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Exact edge expansion: minimum of `|E(S, S')| / |S|` over nonempty `S`
/// with `|S| <= n/2`, parallel edges counted with multiplicity.
pub fn edge_expansion_exact(g: &Multigraph) -> Result<Rational64, GapError> {
    let n = g.n;
    if !(2..=EXACT_EXPANSION_MAX_N).contains(&n) {
        return Err(GapError::Capacity { n, max: EXACT_EXPANSION_MAX_N });
    }
    let masks: Vec<(u32, u32)> = g.edges.iter().map(|&(u, v)| (1 << (u - 1), 1 << (v - 1))).collect();
    let mut best: Option<Rational64> = None;
    for s in 1u32..(1 << n) {
        let size = s.count_ones() as usize;
        if size > n / 2 {
            continue;
        }
        let cut = masks.iter().filter(|&&(a, b)| (s & a == 0) != (s & b == 0)).count();
        let h = Rational64::new(cut as i64, size as i64);
        if best.is_none_or(|b| h < b) {
            best = Some(h);
        }
    }
    Ok(best.expect("n >= 2 has a one-vertex subset"))
}

/// Second-largest adjacency eigenvalue of a connected regular graph, by
/// power iteration on `A + dI` restricted to the complement of the all-ones
/// vector.
pub fn second_eigenvalue(g: &Multigraph) -> Result<f64, GapError> {
    let d = g.regular_degree().ok_or(GapError::Irregular)?;
    if !g.is_connected() {
        return Err(GapError::Disconnected);
    }
    let n = g.n;
    if n < 2 {
        return Err(GapError::Capacity { n, max: EXACT_EXPANSION_MAX_N });
    }
    let shift = d as f64;
    let apply = |x: &[f64]| {
        let mut y: Vec<f64> = x.iter().map(|v| v * shift).collect();
        for &(u, v) in &g.edges {
            y[u - 1] += x[v - 1];
            y[v - 1] += x[u - 1];
        }
        y
    };
    let deflate = |x: &mut [f64]| {
        let mean = x.iter().sum::<f64>() / n as f64;
        x.iter_mut().for_each(|v| *v -= mean);
    };
    let normalize = |x: &mut [f64]| {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            x.iter_mut().for_each(|v| *v /= norm);
        }
        norm
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x1cc);
    let mut x: Vec<f64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
    deflate(&mut x);
    normalize(&mut x);
    let mut mu = 0.0;
    for _ in 0..EIGEN_MAX_ITERS {
        let mut y = apply(&x);
        deflate(&mut y);
        let rq: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        let residual = y.iter().zip(&x).map(|(a, b)| (a - rq * b).powi(2)).sum::<f64>().sqrt();
        if normalize(&mut y) < 1e-300 {
            return Ok(-shift);
        }
        mu = rq;
        x = y;
        if residual < EIGEN_TOL {
            break;
        }
    }
    Ok(mu - shift)
}

/// Spectral lower bound `(d - lambda2) / 2` on the edge expansion.
pub fn expansion_lower_bound_spectral(g: &Multigraph) -> Result<f64, GapError> {
    let d = g.regular_degree().ok_or(GapError::Irregular)?;
    Ok((d as f64 - second_eigenvalue(g)?) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpanderMethod {
    RandomRegular,
    Clique,
    PathFallback,
}

impl ExpanderMethod {
    pub fn name(self) -> &'static str {
        match self {
            ExpanderMethod::RandomRegular => "RANDOM_REGULAR",
            ExpanderMethod::Clique => "CLIQUE",
            ExpanderMethod::PathFallback => "PATH_FALLBACK",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "RANDOM_REGULAR" => Some(ExpanderMethod::RandomRegular),
            "CLIQUE" => Some(ExpanderMethod::Clique),
            "PATH_FALLBACK" => Some(ExpanderMethod::PathFallback),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpanderCert {
    pub n: usize,
    pub d: usize,
    pub lambda2: f64,
    pub h_spectral: f64,
    pub h_exact: Option<Rational64>,
    pub method: ExpanderMethod,
}

impl ExpanderCert {
    fn of(g: &Multigraph, method: ExpanderMethod, exact: bool) -> Result<Self, GapError> {
        let d = g.regular_degree().ok_or(GapError::Irregular)?;
        let lambda2 = second_eigenvalue(g)?;
        let h_exact = if exact { Some(edge_expansion_exact(g)?) } else { None };
        Ok(ExpanderCert { n: g.n, d, lambda2, h_spectral: (d as f64 - lambda2) / 2.0, h_exact, method })
    }

    fn trivial(n: usize) -> Self {
        ExpanderCert { n, d: 0, lambda2: 0.0, h_spectral: 0.0, h_exact: None, method: ExpanderMethod::PathFallback }
    }

    /// Certified expansion: exact when known, otherwise the spectral bound
    /// rounded down to a multiple of 1e-6. `None` for a single vertex.
    pub fn certified_h(&self) -> Option<Rational64> {
        if self.n < 2 {
            return None;
        }
        self.h_exact.or_else(|| {
            let floor = ((self.h_spectral - EIGEN_TOL) * SPECTRAL_DENOM as f64).floor() as i64;
            Some(Rational64::new(floor.max(0), SPECTRAL_DENOM))
        })
    }
}

/// Map-file summary of the graph used for one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpanderRecord {
    pub var: u32,
    pub n: usize,
    pub d: usize,
    /// Certified expansion; `None` for a single vertex, where it is vacuous.
    pub h: Option<Rational64>,
    pub method: ExpanderMethod,
}

fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Multigraph {
    let mut edges = Vec::with_capacity(n * d / 2);
    for _ in 0..d / 2 {
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            perm.shuffle(rng);
            if perm.iter().enumerate().all(|(i, &p)| i != p) {
                break;
            }
        }
        edges.extend(perm.iter().enumerate().map(|(i, &p)| (i + 1, p + 1)));
    }
    Multigraph { n, edges }
}

/// Graph on `n` vertices with certified expansion at least `target_h`.
/// Small `n` gets the complete graph (a single edge for `n = 2`, no edges
/// for `n = 1`); otherwise `d/2` random derangements form a `d`-regular
/// multigraph, resampled up to `retries` times.
pub fn build_expander(
    n: usize,
    d: usize,
    target_h: f64,
    seed: u64,
    retries: usize,
) -> Result<(Multigraph, ExpanderCert), GapError> {
    match n {
        0 => return Err(GapError::Nonpositive("vertex count")),
        1 => return Ok((Multigraph { n, edges: Vec::new() }, ExpanderCert::trivial(1))),
        2 => {
            let g = Multigraph::complete(2);
            let cert = ExpanderCert::of(&g, ExpanderMethod::PathFallback, true)?;
            return Ok((g, cert));
        }
        _ => {}
    }
    if d < 2 || d % 2 == 1 {
        return Err(GapError::Degree(d));
    }
    if n <= d + 1 {
        let g = Multigraph::complete(n);
        let cert = ExpanderCert::of(&g, ExpanderMethod::Clique, n <= EXACT_EXPANSION_MAX_N)?;
        return Ok((g, cert));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ExpanderCert> = None;
    for _ in 0..retries.max(1) {
        let g = random_regular(n, d, &mut rng);
        if !g.is_connected() {
            continue;
        }
        let cert = ExpanderCert::of(&g, ExpanderMethod::RandomRegular, n <= EXACT_CERT_MAX_N)?;
        let h = cert.h_exact.map_or(cert.h_spectral, |h| *h.numer() as f64 / *h.denom() as f64);
        if h >= target_h {
            return Ok((g, cert));
        }
        if best.as_ref().is_none_or(|b| b.certified_h() < cert.certified_h()) {
            best = Some(cert);
        }
    }
    Err(GapError::RetriesExhausted { n, target: target_h, best: best.map(Box::new) })
}
