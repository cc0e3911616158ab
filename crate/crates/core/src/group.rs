//! Finite groups with their unitary irreducible representations.
//!
//! Elements are indices `0..order` with the identity at 0. Irreps are
//! supplied, not derived: the built-in families carry their standard tables,
//! and custom groups are read from a text file (see [`parse_group_file`]).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HOMOMORPHISM_TOL: f64 = 1e-10;
pub const SCHUR_TOL: f64 = 1e-9;
/// Associativity is checked exhaustively up to this order.
pub const ASSOCIATIVITY_LIMIT: usize = 48;

#[derive(Debug, Clone)]
pub struct Irrep {
    pub dim: usize,
    /// One `dim × dim` unitary per group element.
    pub matrices: Vec<DMatrix<Complex64>>,
}

/// A validated finite group with a complete set of unitary irreps.
#[derive(Debug, Clone)]
pub struct GroupData {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    irreps: Vec<Irrep>,
}

impl GroupData {
    /// Validates the group law and the representation data.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>, irreps: Vec<Irrep>) -> Result<Self> {
        let name = name.into();
        let order = table.len();
        if order == 0 {
            return Err(Error::Contract("group order must be at least 1".into()));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (g, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Contract(format!("table row {g} has {} entries, expected {order}", row.len())));
            }
            for &h in row {
                if h >= order {
                    return Err(Error::Contract(format!("table entry {h} out of range in row {g}")));
                }
            }
            flat.extend_from_slice(row);
        }
        let mul = |a: usize, b: usize| flat[a * order + b];

        for g in 0..order {
            if mul(0, g) != g || mul(g, 0) != g {
                return Err(Error::Contract(format!("element 0 is not an identity (fails at {g})")));
            }
        }
        let mut inverses = vec![usize::MAX; order];
        for g in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for h in 0..order {
                seen_row[mul(g, h)] = true;
                seen_col[mul(h, g)] = true;
                if mul(g, h) == 0 {
                    inverses[g] = h;
                }
            }
            if seen_row.contains(&false) || seen_col.contains(&false) {
                return Err(Error::Contract(format!("row or column {g} of the table is not a permutation")));
            }
            if mul(inverses[g], g) != 0 {
                return Err(Error::Contract(format!("element {g} has no two-sided inverse")));
            }
        }
        if order <= ASSOCIATIVITY_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul(a, b);
                    for c in 0..order {
                        if mul(ab, c) != mul(a, mul(b, c)) {
                            return Err(Error::Contract(format!("table is not associative at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        }

        let group = GroupData {
            name,
            order,
            table: flat,
            inverses,
            irreps,
        };
        group.validate_irreps()?;
        Ok(group)
    }

    fn validate_irreps(&self) -> Result<()> {
        let n = self.order;
        if self.irreps.is_empty() {
            return Err(Error::Contract("no irreps supplied".into()));
        }
        let sum_sq: usize = self.irreps.iter().map(|p| p.dim * p.dim).sum();
        if sum_sq != n {
            return Err(Error::Contract(format!("Σ d² = {sum_sq} but the group has order {n}")));
        }
        for (k, pi) in self.irreps.iter().enumerate() {
            if pi.matrices.len() != n {
                return Err(Error::Contract(format!("irrep {k} has {} matrices, expected {n}", pi.matrices.len())));
            }
            let id = DMatrix::<Complex64>::identity(pi.dim, pi.dim);
            for (g, m) in pi.matrices.iter().enumerate() {
                if m.nrows() != pi.dim || m.ncols() != pi.dim {
                    return Err(Error::Contract(format!("irrep {k} matrix {g} has the wrong shape")));
                }
                if max_abs(&(m.adjoint() * m - &id)) > HOMOMORPHISM_TOL {
                    return Err(Error::Contract(format!("irrep {k} is not unitary at element {g}")));
                }
            }
            for g in 0..n {
                for h in 0..n {
                    let lhs = &pi.matrices[g] * &pi.matrices[h];
                    if max_abs(&(lhs - &pi.matrices[self.mul(g, h)])) > HOMOMORPHISM_TOL {
                        return Err(Error::Contract(format!(
                            "irrep {k} is not a homomorphism at ({g}, {h})"
                        )));
                    }
                }
            }
        }
        // Schur: (1/|G|) Σ_g π_ij(g) conj(ρ_kl(g)) = δ_πρ δ_ik δ_jl / d_π
        for (a, pi) in self.irreps.iter().enumerate() {
            for (b, rho) in self.irreps.iter().enumerate().skip(a) {
                for i in 0..pi.dim {
                    for j in 0..pi.dim {
                        for k in 0..rho.dim {
                            for l in 0..rho.dim {
                                let s: Complex64 = (0..n)
                                    .map(|g| pi.matrices[g][(i, j)] * rho.matrices[g][(k, l)].conj())
                                    .sum::<Complex64>()
                                    / n as f64;
                                let expected = if a == b && i == k && j == l { 1.0 / pi.dim as f64 } else { 0.0 };
                                if (s - expected).norm() > SCHUR_TOL {
                                    return Err(Error::Contract(format!(
                                        "Schur orthogonality fails for irreps {a}, {b} at ({i},{j}),({k},{l})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn irrep_dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|p| p.dim).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.irreps.iter().all(|p| p.dim == 1)
    }

    /// Serializes to the text format read by [`parse_group_file`].
    pub fn to_group_file(&self) -> String {
        let mut out = format!("name {}\norder {}\ntable\n", self.name, self.order);
        for g in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|h| self.mul(g, h).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        for pi in &self.irreps {
            out.push_str(&format!("irrep {}\n", pi.dim));
            for m in &pi.matrices {
                let mut entries = Vec::with_capacity(pi.dim * pi.dim);
                for i in 0..pi.dim {
                    for j in 0..pi.dim {
                        entries.push(format_complex(m[(i, j)]));
                    }
                }
                out.push_str(&entries.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// The built-in group families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic(usize),
    Product(Vec<usize>),
    Dihedral(usize),
    Symmetric3,
    Quaternion8,
}

/// The built-in catalogue: cyclic 2..=12, Z₂×Z₂, Z₂×Z₄, dihedral 3..=6, S₃, Q₈.
pub fn builtin_groups() -> Vec<GroupKind> {
    let mut v: Vec<GroupKind> = (2..=12).map(GroupKind::Cyclic).collect();
    v.push(GroupKind::Product(vec![2, 2]));
    v.push(GroupKind::Product(vec![2, 4]));
    v.extend((3..=6).map(GroupKind::Dihedral));
    v.push(GroupKind::Symmetric3);
    v.push(GroupKind::Quaternion8);
    v
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupKind::Product(ns) => {
                let parts: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
                write!(f, "product({})", parts.join(","))
            }
            GroupKind::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupKind::Symmetric3 => write!(f, "symmetric3"),
            GroupKind::Quaternion8 => write!(f, "quaternion8"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse {
            line: 0,
            msg: format!("unknown group '{s}'; expected cyclic(n), product(n1,n2,..), dihedral(n), symmetric3 or quaternion8"),
        };
        match s {
            "symmetric3" | "S3" => return Ok(GroupKind::Symmetric3),
            "quaternion8" | "Q8" => return Ok(GroupKind::Quaternion8),
            _ => {}
        }
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let head = &s[..open];
        let args: Vec<usize> = s[open + 1..s.len() - 1]
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (head, args.as_slice()) {
            ("cyclic", [n]) => Ok(GroupKind::Cyclic(*n)),
            ("dihedral", [n]) => Ok(GroupKind::Dihedral(*n)),
            ("product", ns) if !ns.is_empty() => Ok(GroupKind::Product(ns.to_vec())),
            _ => Err(bad()),
        }
    }
}

/// Builds and validates a built-in group.
pub fn build_group(kind: &GroupKind) -> Result<GroupData> {
    match kind {
        GroupKind::Cyclic(n) => product_group(kind.to_string(), &[*n]),
        GroupKind::Product(ns) => {
            if ns.is_empty() {
                return Err(Error::Contract("product needs at least one factor".into()));
            }
            product_group(kind.to_string(), ns)
        }
        GroupKind::Dihedral(n) => dihedral(kind.to_string(), *n),
        GroupKind::Symmetric3 => dihedral(kind.to_string(), 3),
        GroupKind::Quaternion8 => quaternion8(),
    }
}

fn root_of_unity(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % n) as f64 / n as f64)
}

fn scalar(z: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_element(1, 1, z)
}

/// `Z_{n_1} × … × Z_{n_k}` in mixed radix (first factor most significant).
fn product_group(name: String, ns: &[usize]) -> Result<GroupData> {
    if ns.contains(&0) {
        return Err(Error::Contract("cyclic factors need n ≥ 1".into()));
    }
    let order: usize = ns.iter().product();
    let digits = |mut g: usize| -> Vec<usize> {
        let mut d = vec![0; ns.len()];
        for i in (0..ns.len()).rev() {
            d[i] = g % ns[i];
            g /= ns[i];
        }
        d
    };
    let compose = |d: &[usize]| d.iter().zip(ns).fold(0, |acc, (&x, &n)| acc * n + x);
    let table = (0..order)
        .map(|a| {
            let da = digits(a);
            (0..order)
                .map(|b| {
                    let db = digits(b);
                    let sum: Vec<usize> = da.iter().zip(&db).zip(ns).map(|((x, y), n)| (x + y) % n).collect();
                    compose(&sum)
                })
                .collect()
        })
        .collect();
    // characters χ_k(g) = Π_i exp(2πi k_i g_i / n_i), k in the same mixed radix
    let irreps = (0..order)
        .map(|k| {
            let dk = digits(k);
            let matrices = (0..order)
                .map(|g| {
                    let dg = digits(g);
                    let z = dk
                        .iter()
                        .zip(&dg)
                        .zip(ns)
                        .map(|((a, b), &n)| root_of_unity(a * b, n))
                        .product();
                    scalar(z)
                })
                .collect();
            Irrep { dim: 1, matrices }
        })
        .collect();
    GroupData::new(name, table, irreps)
}

/// `D_n` of order `2n`: index `k` is `r^k`, index `n + k` is `s r^k`.
fn dihedral(name: String, n: usize) -> Result<GroupData> {
    if n == 0 {
        return Err(Error::Contract("dihedral needs n ≥ 1".into()));
    }
    let split = |g: usize| (g / n, g % n);
    // (s^a r^b)(s^c r^d) = s^{a+c} r^{(-1)^c b + d}
    let mul = |x: usize, y: usize| {
        let (a, b) = split(x);
        let (c, d) = split(y);
        let rot = if c == 0 { (b + d) % n } else { (n - b + d) % n };
        ((a + c) % 2) * n + rot
    };
    let order = 2 * n;
    let table = (0..order).map(|x| (0..order).map(|y| mul(x, y)).collect()).collect();

    let one_dim = |eps_r: f64, eps_s: f64| Irrep {
        dim: 1,
        matrices: (0..order)
            .map(|g| {
                let (a, b) = split(g);
                scalar(Complex64::new(eps_s.powi(a as i32) * eps_r.powi(b as i32), 0.0))
            })
            .collect(),
    };
    let mut irreps = vec![one_dim(1.0, 1.0), one_dim(1.0, -1.0)];
    if n.is_multiple_of(2) {
        irreps.push(one_dim(-1.0, 1.0));
        irreps.push(one_dim(-1.0, -1.0));
    }
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    for j in 1..=((n - 1) / 2) {
        let matrices = (0..order)
            .map(|g| {
                let (a, b) = split(g);
                let w = root_of_unity(j * b, n);
                let rot = DMatrix::from_row_slice(2, 2, &[w, zero, zero, w.conj()]);
                if a == 0 {
                    rot
                } else {
                    DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]) * rot
                }
            })
            .collect();
        irreps.push(Irrep { dim: 2, matrices });
    }
    GroupData::new(name, table, irreps)
}

/// `Q_8 = {±1, ±i, ±j, ±k}` indexed `1, −1, i, −i, j, −j, k, −k`.
fn quaternion8() -> Result<GroupData> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let unit = [
        DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]),
        DMatrix::from_row_slice(2, 2, &[c(0., 1.), c(0., 0.), c(0., 0.), c(0., -1.)]),
        DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]),
        DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 1.), c(0., 1.), c(0., 0.)]),
    ];
    let mats: Vec<DMatrix<Complex64>> = (0..8)
        .map(|g| {
            let sign = if g % 2 == 0 { 1.0 } else { -1.0 };
            &unit[g / 2] * c(sign, 0.0)
        })
        .collect();
    let lookup = |m: &DMatrix<Complex64>| mats.iter().position(|x| max_abs(&(x - m)) < 1e-12).unwrap();
    let table = (0..8)
        .map(|a| (0..8).map(|b| lookup(&(&mats[a] * &mats[b]))).collect())
        .collect();

    // signs of (i, j, k) for the three nontrivial characters
    let chars = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    let mut irreps: Vec<Irrep> = chars
        .iter()
        .map(|signs| Irrep {
            dim: 1,
            matrices: (0..8)
                .map(|g| {
                    let v = if g / 2 == 0 { 1.0 } else { signs[g / 2 - 1] };
                    scalar(c(v, 0.0))
                })
                .collect(),
        })
        .collect();
    irreps.push(Irrep { dim: 2, matrices: mats });
    GroupData::new("quaternion8", table, irreps)
}

/// Parses a complex literal: `3`, `-2.5`, `1e-3`, `2i`, `-i`, `1+2i`, `0.5-1.5e-2i`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let s = s.trim();
    let err = || format!("bad complex literal '{s}'");
    if s.is_empty() {
        return Err(err());
    }
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let coef = |t: &str| -> std::result::Result<f64, String> {
            match t {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => t.parse::<f64>().map_err(|_| err()),
            }
        };
        match split {
            Some(idx) => {
                let re = body[..idx].parse::<f64>().map_err(|_| err())?;
                Ok(Complex64::new(re, coef(&body[idx..])?))
            }
            None => Ok(Complex64::new(0.0, coef(body)?)),
        }
    } else {
        s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err())
    }
}

/// Shortest round-trip rendering in the `a+bi` form.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Reads a group definition.
///
/// ```text
/// # comments and blank lines are ignored
/// name klein          (optional)
/// order 4
/// table               (order rows of order indices; identity must be 0)
/// 0 1 2 3
/// ...
/// irrep 1             (dimension d, then one line per element with
/// 1                    d*d row-major complex literals)
/// ...
/// ```
pub fn parse_group_file(text: &str) -> Result<GroupData> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty())
        .collect();
    let perr = |line: usize, msg: String| Error::Parse { line, msg };

    let mut name = String::from("custom");
    let mut order: Option<usize> = None;
    let mut table: Vec<Vec<usize>> = Vec::new();
    let mut irreps = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (ln, toks) = &lines[i];
        match toks[0] {
            "name" => {
                name = toks[1..].join(" ");
                i += 1;
            }
            "order" => {
                let n = toks
                    .get(1)
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| perr(*ln, "order needs a positive integer".into()))?;
                order = Some(n);
                i += 1;
            }
            "table" => {
                let n = order.ok_or_else(|| perr(*ln, "order must precede table".into()))?;
                for r in 0..n {
                    let (rl, row) = lines
                        .get(i + 1 + r)
                        .ok_or_else(|| perr(*ln, format!("table has fewer than {n} rows")))?;
                    let parsed = row
                        .iter()
                        .map(|t| t.parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| perr(*rl, "table rows hold element indices".into()))?;
                    if parsed.len() != n {
                        return Err(perr(*rl, format!("table row has {} entries, expected {n}", parsed.len())));
                    }
                    table.push(parsed);
                }
                i += 1 + n;
            }
            "irrep" => {
                let n = order.ok_or_else(|| perr(*ln, "order must precede irreps".into()))?;
                let d = toks
                    .get(1)
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|&d| d > 0)
                    .ok_or_else(|| perr(*ln, "irrep needs a positive dimension".into()))?;
                let mut matrices = Vec::with_capacity(n);
                for g in 0..n {
                    let (el, entries) = lines
                        .get(i + 1 + g)
                        .ok_or_else(|| perr(*ln, format!("irrep has fewer than {n} element lines")))?;
                    if entries.len() != d * d {
                        return Err(perr(*el, format!("expected {} entries, found {}", d * d, entries.len())));
                    }
                    let vals = entries
                        .iter()
                        .map(|t| parse_complex(t))
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|m| perr(*el, m))?;
                    matrices.push(DMatrix::from_row_slice(d, d, &vals));
                }
                irreps.push(Irrep { dim: d, matrices });
                i += 1 + n;
            }
            other => return Err(perr(*ln, format!("unexpected '{other}'"))),
        }
    }
    if order.is_none() || table.is_empty() {
        return Err(perr(0, "missing order or table section".into()));
    }
    GroupData::new(name, table, irreps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irrep_dimensions() {
        assert_eq!(build_group(&GroupKind::Cyclic(2)).unwrap().irrep_dims(), vec![1, 1]);
        assert_eq!(build_group(&GroupKind::Symmetric3).unwrap().irrep_dims(), vec![1, 1, 2]);
        assert_eq!(build_group(&GroupKind::Quaternion8).unwrap().irrep_dims(), vec![1, 1, 1, 1, 2]);
        assert_eq!(build_group(&GroupKind::Dihedral(4)).unwrap().irrep_dims(), vec![1, 1, 1, 1, 2]);
        assert_eq!(build_group(&GroupKind::Dihedral(5)).unwrap().irrep_dims(), vec![1, 1, 2, 2]);
    }

    #[test]
    fn all_builtins_validate() {
        let mut kinds: Vec<GroupKind> = (1..=12).map(GroupKind::Cyclic).collect();
        kinds.extend((1..=8).map(GroupKind::Dihedral));
        kinds.push(GroupKind::Product(vec![2, 2]));
        kinds.push(GroupKind::Product(vec![2, 4]));
        kinds.push(GroupKind::Product(vec![2, 3, 4]));
        kinds.push(GroupKind::Symmetric3);
        kinds.push(GroupKind::Quaternion8);
        for k in kinds {
            let g = build_group(&k).unwrap();
            let sum: usize = g.irrep_dims().iter().map(|d| d * d).sum();
            assert_eq!(sum, g.order(), "{k}");
        }
    }

    #[test]
    fn quaternion_relations() {
        let g = build_group(&GroupKind::Quaternion8).unwrap();
        let (i, j, k, minus_one) = (2, 4, 6, 1);
        assert_eq!(g.mul(i, i), minus_one);
        assert_eq!(g.mul(i, j), k);
        assert_eq!(g.mul(j, i), 7);
        assert!(!g.is_abelian());
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("cyclic(5)".parse::<GroupKind>().unwrap(), GroupKind::Cyclic(5));
        assert_eq!("product(2, 4)".parse::<GroupKind>().unwrap(), GroupKind::Product(vec![2, 4]));
        assert_eq!("S3".parse::<GroupKind>().unwrap(), GroupKind::Symmetric3);
        assert!("cyclic(x)".parse::<GroupKind>().is_err());
        assert!("torus(3)".parse::<GroupKind>().is_err());
        assert!(build_group(&GroupKind::Cyclic(0)).is_err());
    }

    #[test]
    fn complex_literals() {
        let c = |a, b| Complex64::new(a, b);
        assert_eq!(parse_complex("3").unwrap(), c(3.0, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2.5i").unwrap(), c(0.0, 2.5));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1e-3-2e-2i").unwrap(), c(1e-3, -2e-2));
        assert_eq!(parse_complex("-0.5+i").unwrap(), c(-0.5, 1.0));
        assert!(parse_complex("1+2j").is_err());
        for z in [c(0.1, -0.3), c(-1.0, 1e-17), c(2.0, 0.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn group_file_round_trip() {
        let g = build_group(&GroupKind::Quaternion8).unwrap();
        let back = parse_group_file(&g.to_group_file()).unwrap();
        assert_eq!(back.order(), 8);
        assert_eq!(back.irrep_dims(), g.irrep_dims());
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(back.mul(a, b), g.mul(a, b));
            }
        }
    }

    #[test]
    fn group_file_errors() {
        let broken_table = "order 2\ntable\n0 1\n1 1\nirrep 1\n1\n1\nirrep 1\n1\n-1\n";
        assert!(matches!(parse_group_file(broken_table), Err(Error::Contract(_))));
        let bad_irrep = "order 2\ntable\n0 1\n1 0\nirrep 1\n1\n1\nirrep 1\n1\n1\n";
        assert!(matches!(parse_group_file(bad_irrep), Err(Error::Contract(_))));
        let short = "order 2\ntable\n0 1\n";
        assert!(matches!(parse_group_file(short), Err(Error::Parse { .. })));
        let junk = "order 2\nfoo\n";
        assert!(matches!(parse_group_file(junk), Err(Error::Parse { line: 2, .. })));
        let good = "# Z2\norder 2\ntable\n0 1\n1 0\nirrep 1\n1\n1\nirrep 1\n1\n-1+0i\n";
        assert_eq!(parse_group_file(good).unwrap().order(), 2);
    }
}
