//! JSON encodings of the library's objects.
//!
//! Integers are written as decimal strings so that values beyond 64 bits survive;
//! the readers also accept plain JSON integers. Group coordinates follow
//! [`FgAbGroup`]: torsion generators first, then the free ones.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::complex::{ChainMap, CochainComplex, SesReport, TwoRowBicomplex};
use crate::error::{Error, Result};
use crate::galois::DifferenceField;
use crate::field::FiniteField;
use crate::linalg::{FgAbGroup, GroupHom, Int, IntMatrix};
use crate::sigma::{FiniteSigmaGroup, SigmaModule, DEFAULT_GROUP_ORDER_CAP};
use crate::simplicial::{SelfMap, SimplicialComplex};

pub fn int(n: &Int) -> Value {
    Value::String(n.to_string())
}

pub fn uint(n: impl ToString) -> Value {
    Value::String(n.to_string())
}

pub fn parse_int(v: &Value, what: &str) -> Result<Int> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<Int>()
            .map_err(|_| Error::invalid(format!("{what}: {s:?} is not an integer"))),
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .or_else(|| n.as_u64().map(Int::from))
            .ok_or_else(|| Error::invalid(format!("{what}: {n} is not an integer"))),
        _ => Err(Error::invalid(format!("{what}: expected an integer"))),
    }
}

pub fn parse_i64(v: &Value, what: &str) -> Result<i64> {
    i64::try_from(parse_int(v, what)?).map_err(|_| Error::invalid(format!("{what}: out of range")))
}

pub fn parse_u64(v: &Value, what: &str) -> Result<u64> {
    u64::try_from(parse_int(v, what)?).map_err(|_| Error::invalid(format!("{what}: out of range")))
}

pub fn parse_usize(v: &Value, what: &str) -> Result<usize> {
    usize::try_from(parse_int(v, what)?)
        .map_err(|_| Error::invalid(format!("{what}: out of range")))
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::invalid(format!("missing field {key:?}")))
}

pub fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::invalid(format!("{what}: expected an array")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::invalid(format!("{what}: expected an object")))
}

// ---------------------------------------------------------------------------
// Matrices, groups, homomorphisms

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    json!({
        "rows": uint(m.rows()),
        "cols": uint(m.cols()),
        "entries": m.to_rows().iter().map(|r| r.iter().map(int).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// Accepts `{"rows","cols","entries"}`, a bare array of rows, or either under a `"matrix"` key.
pub fn matrix_from_json(v: &Value) -> Result<IntMatrix> {
    if let Some(inner) = v.get("matrix") {
        return matrix_from_json(inner);
    }
    let (rows, cols, data) = match v {
        Value::Array(data) => {
            let cols = match data.first() {
                Some(r) => array(r, "matrix row")?.len(),
                None => return Err(Error::invalid("a bare matrix needs at least one row")),
            };
            (data.len(), cols, data)
        }
        _ => (
            parse_usize(field(v, "rows")?, "rows")?,
            parse_usize(field(v, "cols")?, "cols")?,
            array(field(v, "entries")?, "entries")?,
        ),
    };
    if data.len() != rows {
        return Err(Error::invalid(format!(
            "matrix has {} rows, expected {rows}",
            data.len()
        )));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in data.iter().enumerate() {
        let row = array(row, "matrix row")?;
        if row.len() != cols {
            return Err(Error::invalid(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for x in row {
            entries.push(parse_int(x, "matrix entry")?);
        }
    }
    IntMatrix::from_entries(rows, cols, entries)
}

pub fn group_to_json(g: &FgAbGroup) -> Value {
    json!({
        "free_rank": uint(g.free_rank()),
        "torsion": g.torsion().iter().map(int).collect::<Vec<_>>(),
        "notation": g.notation(),
    })
}

/// Accepts `{"free_rank", "torsion"}` (a divisibility chain) or a notation string like `"Z^2 + Z/4"`.
pub fn group_from_json(v: &Value) -> Result<FgAbGroup> {
    if let Some(s) = v.as_str() {
        return FgAbGroup::parse_notation(s);
    }
    let free = match v.get("free_rank") {
        Some(r) => parse_usize(r, "free_rank")?,
        None => 0,
    };
    let torsion = match v.get("torsion") {
        Some(t) => array(t, "torsion")?
            .iter()
            .map(|x| parse_int(x, "torsion"))
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    FgAbGroup::new(free, torsion)
}

pub fn groups_to_json(gs: &[FgAbGroup]) -> Value {
    Value::Array(gs.iter().map(|g| Value::String(g.notation())).collect())
}

pub fn hom_to_json(h: &GroupHom) -> Value {
    json!({
        "source": group_to_json(h.source()),
        "target": group_to_json(h.target()),
        "matrix": matrix_to_json(h.matrix()),
    })
}

pub fn hom_from_json(v: &Value) -> Result<GroupHom> {
    GroupHom::new(
        group_from_json(field(v, "source")?)?,
        group_from_json(field(v, "target")?)?,
        matrix_from_json(field(v, "matrix")?)?,
    )
}

// ---------------------------------------------------------------------------
// Difference modules and finite groups

pub fn sigma_module_to_json(m: &SigmaModule) -> Value {
    json!({
        "carrier": group_to_json(m.carrier()),
        "endo": matrix_to_json(m.endo().matrix()),
    })
}

pub fn sigma_module_from_json(v: &Value) -> Result<SigmaModule> {
    let carrier = group_from_json(field(v, "carrier")?)?;
    let endo = matrix_from_json(field(v, "endo")?)?;
    SigmaModule::new(GroupHom::new(carrier.clone(), carrier, endo)?)
}

pub fn finite_group_to_json(g: &FiniteSigmaGroup) -> Value {
    let l = g.labels();
    json!({
        "elements": l,
        "table": g.table().iter().map(|r| r.iter().map(|&x| l[x].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "endo": g.endo_table().iter().map(|&x| l[x].clone()).collect::<Vec<_>>(),
    })
}

/// Table and endo entries may be element indices or element labels.
pub fn finite_group_from_json(v: &Value) -> Result<FiniteSigmaGroup> {
    let labels: Vec<String> = array(field(v, "elements")?, "elements")?
        .iter()
        .map(label)
        .collect::<Result<_>>()?;
    let (table, endo) = {
        let lookup = index_lookup(&labels);
        let table = array(field(v, "table")?, "table")?
            .iter()
            .map(|row| {
                array(row, "table row")?
                    .iter()
                    .map(&lookup)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let endo = match v.get("endo") {
            Some(e) => array(e, "endo")?
                .iter()
                .map(lookup)
                .collect::<Result<_>>()?,
            None => (0..labels.len()).collect(),
        };
        (table, endo)
    };
    FiniteSigmaGroup::new(labels, table, endo, DEFAULT_GROUP_ORDER_CAP)
}

fn label(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::invalid("labels must be strings or numbers")),
    }
}

/// Resolves a reference to one of `labels`: an exact label match first, then a numeric index.
fn index_lookup(labels: &[String]) -> impl Fn(&Value) -> Result<usize> + '_ {
    let by_label: BTreeMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    move |v: &Value| {
        if let Some(&i) = v.as_str().and_then(|s| by_label.get(s)) {
            return Ok(i);
        }
        let i = parse_usize(v, "element reference")?;
        if i < labels.len() {
            Ok(i)
        } else {
            Err(Error::invalid(format!("element reference {v} out of range")))
        }
    }
}

// ---------------------------------------------------------------------------
// Complexes

fn indexed<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> Value) -> Value {
    Value::Object(
        items
            .into_iter()
            .enumerate()
            .map(|(i, x)| (i.to_string(), f(x)))
            .collect(),
    )
}

fn read_indexed<T>(v: &Value, what: &str, f: impl Fn(&Value) -> Result<T>) -> Result<Vec<T>> {
    if let Some(a) = v.as_array() {
        return a.iter().map(f).collect();
    }
    let obj = object(v, what)?;
    let mut out = Vec::with_capacity(obj.len());
    for i in 0..obj.len() {
        let x = obj
            .get(&i.to_string())
            .ok_or_else(|| Error::invalid(format!("{what}: keys must be 0..{}", obj.len())))?;
        out.push(f(x)?);
    }
    Ok(out)
}

pub fn complex_to_json(c: &CochainComplex) -> Value {
    json!({
        "levels": indexed(c.levels(), group_to_json),
        "differentials": indexed(
            (0..c.len().saturating_sub(1)).map(|n| c.differential(n)),
            |d| matrix_to_json(d.matrix()),
        ),
    })
}

/// Levels `0..L` and differentials `dⁿ : Cⁿ → Cⁿ⁺¹`; missing trailing differentials are zero.
pub fn complex_from_json(v: &Value) -> Result<CochainComplex> {
    let levels = read_indexed(field(v, "levels")?, "levels", group_from_json)?;
    let mut mats = match v.get("differentials") {
        Some(d) => read_indexed(d, "differentials", matrix_from_json)?,
        None => Vec::new(),
    };
    let needed = levels.len().saturating_sub(1);
    if mats.len() > needed {
        return Err(Error::invalid("more differentials than level pairs"));
    }
    while mats.len() < needed {
        let n = mats.len();
        mats.push(IntMatrix::zeros(levels[n + 1].ngens(), levels[n].ngens()));
    }
    CochainComplex::from_matrices(levels, mats)
}

/// Row 0 in the top-level `levels`/`differentials`, plus `row1` and the `vertical` components.
pub fn bicomplex_to_json(b: &TwoRowBicomplex) -> Value {
    let mut v = complex_to_json(b.row0());
    v["row1"] = complex_to_json(b.row1());
    v["vertical"] = indexed(
        (0..b.row0().len()).map(|n| b.vertical().component(n)),
        |h| matrix_to_json(h.matrix()),
    );
    v
}

pub fn bicomplex_from_json(v: &Value) -> Result<TwoRowBicomplex> {
    let row0 = complex_from_json(v)?;
    let row1 = complex_from_json(field(v, "row1")?)?;
    let mats = read_indexed(field(v, "vertical")?, "vertical", matrix_from_json)?;
    Ok(TwoRowBicomplex::new(ChainMap::from_matrices(row0, row1, mats)?))
}

pub fn ses_to_json(s: &SesReport) -> Value {
    json!({
        "degree": uint(s.degree),
        "left": s.left.notation(),
        "middle": s.middle.notation(),
        "right": s.right.notation(),
        "exact": s.exact,
        "orders_multiply": s.orders_multiply(),
    })
}

// ---------------------------------------------------------------------------
// Simplicial complexes

pub fn simplicial_complex_to_json(x: &SimplicialComplex) -> Value {
    let labels = x.labels();
    json!({
        "vertices": labels,
        "simplices": x
            .all_simplices()
            .map(|s| s.iter().map(|&v| labels[v].clone()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

/// `simplices` lists facets (their faces are added); entries are vertex labels or indices.
pub fn simplicial_complex_from_json(v: &Value) -> Result<SimplicialComplex> {
    let labels: Vec<String> = array(field(v, "vertices")?, "vertices")?
        .iter()
        .map(label)
        .collect::<Result<_>>()?;
    let facets: Vec<Vec<usize>> = {
        let lookup = index_lookup(&labels);
        match v.get("simplices") {
            Some(s) => array(s, "simplices")?
                .iter()
                .map(|f| array(f, "simplex")?.iter().map(&lookup).collect())
                .collect::<Result<_>>()?,
            None => Vec::new(),
        }
    };
    SimplicialComplex::from_facets(labels, &facets)
}

/// A vertex map `source → target` as an object `{label: label}` or an index array.
pub fn vertex_map_from_json(
    v: &Value,
    source: &SimplicialComplex,
    target: &SimplicialComplex,
) -> Result<Vec<usize>> {
    let to = index_lookup(target.labels());
    if let Some(a) = v.as_array() {
        if a.len() != source.vertex_count() {
            return Err(Error::invalid("vertex map must list every source vertex"));
        }
        return a.iter().map(&to).collect();
    }
    let obj = object(v, "vertex_map")?;
    source
        .labels()
        .iter()
        .map(|l| {
            let x = obj
                .get(l)
                .ok_or_else(|| Error::invalid(format!("vertex map misses {l:?}")))?;
            to(x)
        })
        .collect()
}

pub fn vertex_map_to_json(map: &[usize], source: &SimplicialComplex, target: &SimplicialComplex) -> Value {
    Value::Object(
        map.iter()
            .enumerate()
            .map(|(i, &j)| {
                (
                    source.labels()[i].clone(),
                    Value::String(target.labels()[j].clone()),
                )
            })
            .collect(),
    )
}

pub fn self_map_from_json(v: &Value, x: &SimplicialComplex) -> Result<SelfMap> {
    if let Some(m) = v.get("vertex_map") {
        return Ok(SelfMap::VertexMap(vertex_map_from_json(m, x, x)?));
    }
    if let Some(m) = v.get("chain_selfmap") {
        return Ok(SelfMap::ChainSelfMap(read_indexed(
            m,
            "chain_selfmap",
            matrix_from_json,
        )?));
    }
    Err(Error::invalid("sigma needs \"vertex_map\" or \"chain_selfmap\""))
}

pub fn self_map_to_json(s: &SelfMap, x: &SimplicialComplex) -> Value {
    match s {
        SelfMap::VertexMap(m) => json!({ "vertex_map": vertex_map_to_json(m, x, x) }),
        SelfMap::ChainSelfMap(ms) => json!({ "chain_selfmap": indexed(ms, matrix_to_json) }),
    }
}

/// A space with its self-map and coefficients. `sigma` defaults to the identity and
/// `coefficients` to `(ℤ, id)`.
#[derive(Clone, Debug)]
pub struct SimplicialInput {
    pub space: SimplicialComplex,
    pub sigma: SelfMap,
    pub coefficients: SigmaModule,
}

pub fn simplicial_input_from_json(v: &Value) -> Result<SimplicialInput> {
    let space = simplicial_complex_from_json(v)?;
    let sigma = match v.get("sigma") {
        Some(s) => self_map_from_json(s, &space)?,
        None => SelfMap::identity(&space),
    };
    let coefficients = match v.get("coefficients") {
        Some(c) => sigma_module_from_json(c)?,
        None => SigmaModule::trivial(&FgAbGroup::free(1)),
    };
    Ok(SimplicialInput {
        space,
        sigma,
        coefficients,
    })
}

pub fn simplicial_input_to_json(s: &SimplicialInput) -> Value {
    let mut v = simplicial_complex_to_json(&s.space);
    v["sigma"] = self_map_to_json(&s.sigma, &s.space);
    v["coefficients"] = sigma_module_to_json(&s.coefficients);
    v
}

// ---------------------------------------------------------------------------
// Finite difference fields

/// `{"p", "m", "modulus"?, "r"}`; the modulus lists coefficients from the constant term up, monic.
pub fn field_spec_from_json(v: &Value) -> Result<DifferenceField> {
    let p = parse_u64(field(v, "p")?, "p")?;
    let m = match v.get("m") {
        Some(x) => u32::try_from(parse_u64(x, "m")?).map_err(|_| Error::invalid("m out of range"))?,
        None => 1,
    };
    let r = match v.get("r") {
        Some(x) => u32::try_from(parse_u64(x, "r")?).map_err(|_| Error::invalid("r out of range"))?,
        None => 0,
    };
    let k = match v.get("modulus") {
        Some(Value::Null) | None => FiniteField::new(p, m)?,
        Some(c) => {
            let coeffs: Vec<u64> = array(c, "modulus")?
                .iter()
                .map(|x| parse_u64(x, "modulus coefficient"))
                .collect::<Result<_>>()?;
            FiniteField::with_modulus(p, m, &coeffs)?
        }
    };
    Ok(DifferenceField::new(k, r))
}

pub fn field_spec_to_json(ks: &DifferenceField) -> Value {
    let k = ks.field();
    json!({
        "p": uint(k.p()),
        "m": uint(k.m()),
        "modulus": k.modulus().iter().map(uint).collect::<Vec<_>>(),
        "r": uint(ks.r()),
    })
}

/// A field element given as an integer encoding (base-`p` digits) or a digit array.
pub fn field_element_from_json(k: &FiniteField, v: &Value) -> Result<u64> {
    let x = if let Some(a) = v.as_array() {
        let digits: Vec<u64> = a
            .iter()
            .map(|d| parse_u64(d, "digit"))
            .collect::<Result<_>>()?;
        if digits.len() > k.m() as usize || digits.iter().any(|&d| d >= k.p()) {
            return Err(Error::invalid("digit vector does not describe a field element"));
        }
        k.from_digits(&digits)
    } else {
        parse_u64(v, "field element")?
    };
    if x >= k.order() {
        return Err(Error::invalid(format!("{x} is not an element of F_{}", k.order())));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = IntMatrix::from_rows(&[vec![2i64, -4], vec![6, 8]]);
        let big = IntMatrix::from_entries(1, 1, vec!["123456789012345678901234567890".parse().unwrap()]).unwrap();
        for m in [m, big, IntMatrix::zeros(0, 3)] {
            assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m);
        }
    }

    #[test]
    fn group_round_trip() {
        for g in [
            FgAbGroup::trivial(),
            FgAbGroup::free(2),
            FgAbGroup::new(1, vec![Int::from(2), Int::from(4)]).unwrap(),
        ] {
            assert_eq!(group_from_json(&group_to_json(&g)).unwrap(), g);
            assert_eq!(group_from_json(&json!(g.notation())).unwrap(), g);
        }
        assert!(group_from_json(&json!({"torsion": ["2", "3"]})).is_err());
    }

    #[test]
    fn complex_round_trip() {
        let v = json!({
            "levels": {"0": "Z", "1": "Z", "2": "Z/2"},
            "differentials": {"0": {"rows": "1", "cols": "1", "entries": [["2"]]}},
        });
        let c = complex_from_json(&v).unwrap();
        assert_eq!(c.cohomology_groups()[1], FgAbGroup::cyclic(2));
        assert_eq!(complex_from_json(&complex_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn simplicial_round_trip() {
        let v = json!({
            "vertices": ["a", "b", "c"],
            "simplices": [["a", "b"], ["b", "c"], ["a", "c"]],
            "sigma": {"vertex_map": {"a": "b", "b": "c", "c": "a"}},
        });
        let s = simplicial_input_from_json(&v).unwrap();
        let again = simplicial_input_from_json(&simplicial_input_to_json(&s)).unwrap();
        assert_eq!(again.space, s.space);
        assert_eq!(again.coefficients, s.coefficients);
        assert!(matches!(again.sigma, SelfMap::VertexMap(ref m) if *m == vec![1, 2, 0]));
    }

    #[test]
    fn finite_group_by_labels() {
        let v = json!({
            "elements": ["e", "a"],
            "table": [["e", "a"], ["a", "e"]],
            "endo": ["e", "a"],
        });
        let g = finite_group_from_json(&v).unwrap();
        assert_eq!(g.order(), 2);
        let again = finite_group_from_json(&finite_group_to_json(&g)).unwrap();
        assert_eq!(again.table(), g.table());
    }

    #[test]
    fn field_spec_round_trip() {
        let ks = field_spec_from_json(&json!({"p": "3", "m": "2", "r": "1"})).unwrap();
        let again = field_spec_from_json(&field_spec_to_json(&ks)).unwrap();
        assert_eq!(again, ks);
    }
}
