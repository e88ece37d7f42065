//! Point configurations in P^N: seeded random samples standing in for very
//! general points, star configurations cut out by general hyperplanes, and
//! the twelve points of the Fermat-type ideal ⟨x(y³−z³), y(z³−x³), z(x³−y³)⟩.

mod json;

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exactla::{rank_kernel, FieldMatrix};
use crate::fields::{FieldElement, FieldError, FieldSpec};

/// Random rational and Eisenstein coordinates are integers in
/// `[-RANDOM_COORD_BOUND, RANDOM_COORD_BOUND]`.
pub const RANDOM_COORD_BOUND: i64 = 1_000_000;

/// Random hyperplane coefficients (outside prime fields) are integers in
/// `[-HYPERPLANE_COEFF_BOUND, HYPERPLANE_COEFF_BOUND]`. General position is
/// checked exactly, so a small box only costs the odd retry while keeping
/// the intersection points short.
pub const HYPERPLANE_COEFF_BOUND: i64 = 16;

/// Fresh arrangements drawn before a star configuration gives up.
pub const STAR_MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("field too small: {field} has {available} points in P^{dim}, {requested} requested")]
    FieldTooSmall {
        field: FieldSpec,
        dim: usize,
        available: u128,
        requested: usize,
    },
    #[error("no arrangement of {d} hyperplanes in general position found in {attempts} attempts")]
    GeneralPosition { d: usize, attempts: usize },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

fn invalid(message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        line: 0,
        message: message.into(),
    }
}

/// A point of P^N, scaled so its first nonzero coordinate is one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<FieldElement>) -> Result<Self, ConfigError> {
        let field = coords
            .first()
            .ok_or_else(|| invalid("a point needs coordinates"))?
            .spec();
        if let Some(bad) = coords.iter().find(|c| c.spec() != field) {
            return Err(FieldError::MixedFields(field, bad.spec()).into());
        }
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| invalid("all coordinates are zero"))?
            .inv()?;
        let coords = coords
            .iter()
            .map(|c| c.mul(&lead))
            .collect::<Result<_, _>>()?;
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].spec()
    }

    /// Index of the first nonzero coordinate (which equals one).
    pub fn chart(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero point")
    }

    /// Value of the linear form with coefficients `h` at this point.
    pub fn pair(&self, h: &[FieldElement]) -> Result<FieldElement, FieldError> {
        self.coords
            .iter()
            .zip(h)
            .try_fold(self.field().zero(), |acc, (x, a)| acc.add(&x.mul(a)?))
    }
}

/// A finite set of distinct points in P^N over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    dim: usize,
    field: FieldSpec,
    points: Vec<ProjectivePoint>,
    label: String,
}

impl PointConfiguration {
    pub fn new(
        dim: usize,
        field: FieldSpec,
        points: Vec<ProjectivePoint>,
        label: impl Into<String>,
    ) -> Result<Self, ConfigError> {
        if dim < 2 {
            return Err(invalid(format!("dimension must be at least 2, got {dim}")));
        }
        if points.is_empty() {
            return Err(invalid("a configuration needs at least one point"));
        }
        let mut seen = HashSet::new();
        for (i, p) in points.iter().enumerate() {
            if p.coords.len() != dim + 1 {
                return Err(invalid(format!(
                    "point {i} has {} coordinates, expected {}",
                    p.coords.len(),
                    dim + 1
                )));
            }
            if p.field() != field {
                return Err(FieldError::MixedFields(field, p.field()).into());
            }
            if !seen.insert(p) {
                return Err(invalid(format!("point {i} is repeated")));
            }
        }
        Ok(PointConfiguration {
            dim,
            field,
            points,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn to_json(&self) -> String {
        json::config_to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        json::config_from_json(text)
    }

    /// SHA-256 of the JSON encoding, hex.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// Hyperplanes of P^N given by coefficient vectors of length N+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneArrangement {
    dim: usize,
    field: FieldSpec,
    hyperplanes: Vec<Vec<FieldElement>>,
}

impl HyperplaneArrangement {
    pub fn new(dim: usize, field: FieldSpec, hyperplanes: Vec<Vec<FieldElement>>) -> Self {
        HyperplaneArrangement {
            dim,
            field,
            hyperplanes,
        }
    }

    pub fn from_i64(dim: usize, field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let hyperplanes = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::new(dim, field, hyperplanes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn hyperplanes(&self) -> &[Vec<FieldElement>] {
        &self.hyperplanes
    }

    pub fn to_json(&self) -> String {
        json::arrangement_to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        json::arrangement_from_json(text)
    }

    /// The N-fold intersection points, one per N-subset in lexicographic
    /// order, or `None` when the arrangement is not in general position.
    pub fn intersection_points(&self) -> Option<Vec<ProjectivePoint>> {
        let n = self.dim;
        let well_formed = n >= 1
            && self.hyperplanes.len() >= n
            && self
                .hyperplanes
                .iter()
                .all(|h| h.len() == n + 1 && h.iter().all(|c| c.spec() == self.field));
        if !well_formed {
            return None;
        }
        let mut points = Vec::new();
        for subset in combinations(self.hyperplanes.len(), n) {
            let rows = subset
                .iter()
                .map(|&i| self.hyperplanes[i].clone())
                .collect();
            let m = FieldMatrix::from_rows(self.field, rows).ok()?;
            let r = rank_kernel(&m);
            if r.rank != n {
                return None;
            }
            let point = ProjectivePoint::new(r.certificate?).ok()?;
            // no hyperplane outside the subset may pass through the point
            for (i, h) in self.hyperplanes.iter().enumerate() {
                if !subset.contains(&i) && point.pair(h).ok()?.is_zero() {
                    return None;
                }
            }
            points.push(point);
        }
        Some(points)
    }
}

/// True iff every N of the hyperplanes meet in exactly one point and no
/// such point lies on a further hyperplane.
pub fn validate_general_position(arr: &HyperplaneArrangement) -> bool {
    arr.intersection_points().is_some()
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn sample_element(rng: &mut ChaCha8Rng, field: FieldSpec, bound: i64) -> FieldElement {
    match field {
        FieldSpec::Rational => field.from_i64(rng.gen_range(-bound..=bound)),
        FieldSpec::Eisenstein => {
            let a = field.from_i64(rng.gen_range(-bound..=bound));
            let b = field.from_i64(rng.gen_range(-bound..=bound));
            a.add(&b.mul(&FieldSpec::omega()).expect("same field"))
                .expect("same field")
        }
        FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

/// |P^N(F_p)| = p^N + … + p + 1, saturating.
fn projective_point_count(p: u64, dim: usize) -> u128 {
    (0..=dim).fold(0u128, |acc, _| {
        acc.saturating_mul(p as u128).saturating_add(1)
    })
}

/// `s` distinct random points of P^N. Coordinates come from a ChaCha8
/// stream seeded with `seed`: integers in ±[`RANDOM_COORD_BOUND`] for Q
/// (both components for Q(ω)), uniform residues for F_p. The zero vector and
/// repeats are redrawn; degenerate positions (collinear triples etc.) are kept.
pub fn random_configuration(
    dim: usize,
    s: usize,
    field: FieldSpec,
    seed: u64,
) -> Result<PointConfiguration, ConfigError> {
    if dim < 2 || s == 0 {
        return Err(invalid(format!(
            "need dim ≥ 2 and at least one point (dim={dim}, s={s})"
        )));
    }
    if let FieldSpec::Prime(p) = field {
        let available = projective_point_count(p, dim);
        if (s as u128) > available {
            return Err(ConfigError::FieldTooSmall {
                field,
                dim,
                available,
                requested: s,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(s);
    let mut points = Vec::with_capacity(s);
    while points.len() < s {
        let coords: Vec<FieldElement> = (0..=dim)
            .map(|_| sample_element(&mut rng, field, RANDOM_COORD_BOUND))
            .collect();
        let Ok(p) = ProjectivePoint::new(coords) else {
            continue;
        };
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }
    PointConfiguration::new(
        dim,
        field,
        points,
        format!("random dim={dim} s={s} field={field} seed={seed}"),
    )
}

/// A star configuration together with the arrangement that produced it.
pub fn star_configuration_with_arrangement(
    dim: usize,
    d: usize,
    field: FieldSpec,
    seed: u64,
) -> Result<(PointConfiguration, HyperplaneArrangement), ConfigError> {
    if dim < 2 || d < dim {
        return Err(invalid(format!(
            "a star configuration needs d ≥ N ≥ 2 (N={dim}, d={d})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..STAR_MAX_ATTEMPTS {
        let hyperplanes = (0..d)
            .map(|_| {
                (0..=dim)
                    .map(|_| sample_element(&mut rng, field, HYPERPLANE_COEFF_BOUND))
                    .collect()
            })
            .collect();
        let arr = HyperplaneArrangement::new(dim, field, hyperplanes);
        if let Some(points) = arr.intersection_points() {
            let label = format!(
                "star dim={dim} d={d} field={field} seed={seed} attempt={attempt} hyperplanes={}",
                describe_hyperplanes(&arr)
            );
            let z = PointConfiguration::new(dim, field, points, label)?;
            return Ok((z, arr));
        }
    }
    Err(ConfigError::GeneralPosition {
        d,
        attempts: STAR_MAX_ATTEMPTS,
    })
}

/// All binomial(d, N) intersection points of d random general hyperplanes.
pub fn star_configuration(
    dim: usize,
    d: usize,
    field: FieldSpec,
    seed: u64,
) -> Result<PointConfiguration, ConfigError> {
    star_configuration_with_arrangement(dim, d, field, seed).map(|(z, _)| z)
}

/// The star configuration of a given arrangement.
pub fn star_from_arrangement(
    arr: &HyperplaneArrangement,
) -> Result<PointConfiguration, ConfigError> {
    if arr.dim() < 2 || arr.hyperplanes().len() < arr.dim() {
        return Err(invalid("a star configuration needs d ≥ N ≥ 2"));
    }
    let points = arr
        .intersection_points()
        .ok_or(ConfigError::GeneralPosition {
            d: arr.hyperplanes().len(),
            attempts: 1,
        })?;
    let label = format!(
        "star dim={} d={} field={} hyperplanes={}",
        arr.dim(),
        arr.hyperplanes().len(),
        arr.field(),
        describe_hyperplanes(arr)
    );
    PointConfiguration::new(arr.dim(), arr.field(), points, label)
}

fn describe_hyperplanes(arr: &HyperplaneArrangement) -> String {
    let rows: Vec<String> = arr
        .hyperplanes()
        .iter()
        .map(|h| {
            format!(
                "[{}]",
                h.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// The twelve points P₁…P₁₂ of the Fermat-type configuration, in the
/// listed order, with ε the field's primitive cube root of unity.
pub fn fermat12_configuration(field: FieldSpec) -> Result<PointConfiguration, ConfigError> {
    let e = field.cube_root_of_unity()?;
    let e2 = e.mul(&e)?;
    let o = field.one();
    let z = field.zero();
    let table = [
        [&o, &z, &z],
        [&z, &o, &z],
        [&z, &z, &o],
        [&o, &o, &o],
        [&o, &e, &e2],
        [&o, &e2, &e],
        [&e, &o, &o],
        [&o, &e, &o],
        [&o, &o, &e],
        [&e2, &o, &o],
        [&o, &e2, &o],
        [&o, &o, &e2],
    ];
    let points = table
        .iter()
        .map(|row| ProjectivePoint::new(row.iter().map(|&c| c.clone()).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    PointConfiguration::new(2, field, points, format!("fermat12 field={field}"))
}

/// The nine lines L₁…L₉ (x−y, y−z, z−x, then with ε and ε²) through the
/// Fermat points, as coefficient vectors.
pub fn fermat12_lines(field: FieldSpec) -> Result<Vec<Vec<FieldElement>>, ConfigError> {
    let e = field.cube_root_of_unity()?;
    let mut lines = Vec::with_capacity(9);
    for t in [field.one(), e.clone(), e.mul(&e)?] {
        let m = t.neg();
        let (o, z) = (field.one(), field.zero());
        lines.push(vec![o.clone(), m.clone(), z.clone()]);
        lines.push(vec![z.clone(), o.clone(), m.clone()]);
        lines.push(vec![m, z, o]);
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_idempotent() {
        let f = FieldSpec::Rational;
        let p = ProjectivePoint::new(vec![f.zero(), f.from_i64(3), f.from_i64(6)]).unwrap();
        assert_eq!(p.coords()[1], f.one());
        assert_eq!(p.coords()[2], f.from_i64(2));
        assert_eq!(ProjectivePoint::new(p.coords().to_vec()).unwrap(), p);
        assert_eq!(p.chart(), 1);
    }

    #[test]
    fn random_is_deterministic_and_distinct() {
        let a = random_configuration(2, 3, FieldSpec::Rational, 1).unwrap();
        let b = random_configuration(2, 3, FieldSpec::Rational, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert_ne!(
            a,
            random_configuration(2, 3, FieldSpec::Rational, 2).unwrap()
        );
    }

    #[test]
    fn small_prime_fields() {
        // |P²(F_7)| = 57 ≥ 9, |P²(F_2)| = 7 < 9
        assert_eq!(projective_point_count(7, 2), 57);
        let z = random_configuration(2, 9, FieldSpec::Prime(7), 0).unwrap();
        assert_eq!(z.len(), 9);
        assert!(matches!(
            random_configuration(2, 9, FieldSpec::Prime(2), 0),
            Err(ConfigError::FieldTooSmall { available: 7, .. })
        ));
        // every point of P²(F_2)
        assert_eq!(
            random_configuration(2, 7, FieldSpec::Prime(2), 3)
                .unwrap()
                .len(),
            7
        );
    }

    #[test]
    fn star_sizes() {
        for (n, d, expect) in [(2, 4, 6), (3, 4, 4), (2, 2, 1), (2, 5, 10), (3, 5, 10)] {
            let z = star_configuration(n, d, FieldSpec::Rational, 11).unwrap();
            assert_eq!(z.len(), expect, "N={n} d={d}");
        }
        let z = star_configuration(2, 4, FieldSpec::prime(1_000_003).unwrap(), 5).unwrap();
        assert_eq!(z.len(), 6);
    }

    #[test]
    fn general_position_examples() {
        let f = FieldSpec::Rational;
        let concurrent =
            HyperplaneArrangement::from_i64(2, f, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]);
        assert!(!validate_general_position(&concurrent));
        let triangle =
            HyperplaneArrangement::from_i64(2, f, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(validate_general_position(&triangle));
        let repeated =
            HyperplaneArrangement::from_i64(2, f, &[vec![1, 2, 3], vec![1, 2, 3], vec![0, 0, 1]]);
        assert!(!validate_general_position(&repeated));
        let star = star_from_arrangement(&triangle).unwrap();
        assert_eq!(star.len(), 3);
    }

    #[test]
    fn tiny_field_gives_up() {
        // F_2 has only 7 lines in P², and 4 of them cannot avoid triple points
        assert!(matches!(
            star_configuration(2, 5, FieldSpec::Prime(2), 0),
            Err(ConfigError::GeneralPosition { .. })
        ));
    }

    #[test]
    fn fermat_incidences() {
        for field in [
            FieldSpec::Eisenstein,
            FieldSpec::Prime(7),
            FieldSpec::Prime(2_147_483_647),
        ] {
            let z = fermat12_configuration(field).unwrap();
            assert_eq!(z.len(), 12);
            let lines = fermat12_lines(field).unwrap();
            let incident: Vec<Vec<bool>> = z
                .points()
                .iter()
                .map(|p| lines.iter().map(|l| p.pair(l).unwrap().is_zero()).collect())
                .collect();
            for row in &incident {
                assert_eq!(row.iter().filter(|&&b| b).count(), 3, "{field}");
            }
            for j in 0..9 {
                assert_eq!(incident.iter().filter(|r| r[j]).count(), 4, "{field}");
            }
        }
        assert!(fermat12_configuration(FieldSpec::Rational).is_err());
        assert!(fermat12_configuration(FieldSpec::Prime(5)).is_err());
    }

    #[test]
    fn fermat_contains_listed_points() {
        let f = FieldSpec::Eisenstein;
        let z = fermat12_configuration(f).unwrap();
        let w = FieldSpec::omega();
        let want = [
            vec![f.one(), f.zero(), f.zero()],
            vec![f.one(), f.one(), f.one()],
            vec![f.one(), w.clone(), w.mul(&w).unwrap()],
        ];
        for c in want {
            assert!(z.points().contains(&ProjectivePoint::new(c).unwrap()));
        }
    }

    #[test]
    fn json_round_trip() {
        for z in [
            fermat12_configuration(FieldSpec::Eisenstein).unwrap(),
            random_configuration(3, 5, FieldSpec::Rational, 9).unwrap(),
            random_configuration(2, 4, FieldSpec::Prime(101), 9).unwrap(),
        ] {
            let text = z.to_json();
            assert_eq!(PointConfiguration::from_json(&text).unwrap(), z);
        }
        let (_, arr) = star_configuration_with_arrangement(2, 4, FieldSpec::Rational, 3).unwrap();
        assert_eq!(
            HyperplaneArrangement::from_json(&arr.to_json()).unwrap(),
            arr
        );
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
