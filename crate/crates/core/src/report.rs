//! Full analysis of a single weight system, as JSON or plain text.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;
use serde_json::Value;

use crate::blocks::{build_graph, BlockVerdict};
use crate::cyclo::PsiMap;
use crate::census::MAX_DEGREE;
use crate::error::{Error, Result};
use crate::orders::{map_compatible, standard_covering, weight_orders, OrderTuple};
use crate::weights::{WeightSystem, MAX_VARIABLES};

#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub weights: Vec<u64>,
    pub d: u64,
    pub reduced: Reduced,
    pub normalized: Vec<String>,
    pub c2bar: bool,
    pub c2: bool,
    pub d_w: u64,
    pub milnor: Value,
    /// `[m, psi_w(m)]` pairs; a multiplicity is a string when not integral
    pub psi: Vec<(u64, Value)>,
    /// `(numerator, denominator, multiplicity)` of each exponent
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<(u64, u64, i64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_tuple: Option<[u8; 6]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covering: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockVerdict>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<OrderTuple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders_compatible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saito_strong: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saito_weak: Option<bool>,
    #[serde(skip)]
    pub char_poly: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduced {
    pub weights: Vec<u64>,
    pub d: u64,
}

fn rational_json(q: &BigRational) -> Value {
    if q.is_integer() {
        if let Ok(n) = i64::try_from(q.numer().clone()) {
            return Value::from(n);
        }
    }
    Value::from(q.to_string())
}

/// Rejects systems beyond the supported size before any work is done.
pub fn check_limits(ws: &WeightSystem) -> Result<()> {
    if ws.n() > MAX_VARIABLES || ws.degree() > MAX_DEGREE {
        return Err(Error::Resource(format!(
            "n = {} and d = {} exceed the limits n <= {MAX_VARIABLES}, d <= {MAX_DEGREE}",
            ws.n(),
            ws.degree()
        )));
    }
    Ok(())
}

pub fn analyze(input: &WeightSystem) -> Result<Analysis> {
    check_limits(input)?;
    let ws = input.reduce();
    let c2bar = ws.check_c2bar();
    let c2 = ws.check_c2();
    let psi = ws.psi_w();
    let exponents = if c2bar { Some(ws.rho()?.exponents()) } else { None };
    let (covering, blocks) = if psi.is_nonneg_integral() && !psi.is_empty() {
        let members = standard_covering(&psi)?.members;
        let verdicts = members
            .iter()
            .map(|m| build_graph(m).map(|g| g.verdict()))
            .collect::<Result<Vec<_>>>()?;
        (
            Some(members.iter().map(|m| m.iter().copied().collect()).collect()),
            Some(verdicts),
        )
    } else {
        (None, None)
    };
    let (orders, orders_compatible, saito_strong, saito_weak) = if c2 {
        let t = weight_orders(&ws)?;
        let ok = map_compatible(&psi, &t)?;
        (Some(t), Some(ok), Some(ws.saito_strong()?), Some(ws.saito_weak()?))
    } else {
        (None, None, None, None)
    };
    Ok(Analysis {
        weights: input.weights().to_vec(),
        d: input.degree(),
        normalized: ws.normalize().iter().map(|r| r.to_string()).collect(),
        c2bar,
        c2,
        d_w: ws.d_w(),
        milnor: rational_json(&ws.milnor_number()),
        psi: psi.terms().map(|(m, e)| (m, rational_json(e))).collect(),
        exponents,
        a_tuple: if ws.n() == 4 { Some(ws.a_tuple()?) } else { None },
        covering,
        blocks,
        orders,
        orders_compatible,
        saito_strong,
        saito_weak,
        reduced: Reduced { weights: ws.weights().to_vec(), d: ws.degree() },
        char_poly: phi_product(&psi),
    })
}

/// `Φ_1^2 · Φ_3` style product of cyclotomic factors.
pub fn phi_product(psi: &PsiMap) -> String {
    let factors: Vec<String> = psi
        .terms()
        .map(|(m, e)| {
            if e.is_one() {
                format!("Φ_{m}")
            } else if e.is_integer() && e.is_positive() {
                format!("Φ_{m}^{e}")
            } else {
                format!("Φ_{m}^({e})")
            }
        })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join(" · ")
    }
}

impl Analysis {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let input = self.weights.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        writeln!(s, "weight system   ({input};{})", self.d).unwrap();
        let red = self.reduced.weights.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        writeln!(s, "reduced         ({red};{})", self.reduced.d).unwrap();
        writeln!(s, "normalized      ({})", self.normalized.join(", ")).unwrap();
        writeln!(s, "(C2-bar)        {}", self.c2bar).unwrap();
        writeln!(s, "(C2)            {}", self.c2).unwrap();
        writeln!(s, "d_w             {}", self.d_w).unwrap();
        writeln!(s, "Milnor number   {}", plain(&self.milnor)).unwrap();
        writeln!(s, "char. poly      {}", self.char_poly).unwrap();
        if let Some(a) = self.a_tuple {
            writeln!(s, "a-tuple         {a:?}").unwrap();
        }
        if let Some(exps) = &self.exponents {
            let list: Vec<String> = exps
                .iter()
                .map(|&(a, b, m)| if m == 1 { format!("{a}/{b}") } else { format!("{a}/{b} (x{m})") })
                .collect();
            writeln!(s, "exponents       {}", list.join(", ")).unwrap();
        }
        if let (Some(cov), Some(blocks)) = (&self.covering, &self.blocks) {
            writeln!(s, "standard covering").unwrap();
            // equal members are adjacent; print each distinct one once
            let mut j = 0;
            while j < cov.len() {
                let run = cov[j..].iter().take_while(|m| **m == cov[j]).count();
                let set = cov[j].iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                let verdict = match &blocks[j].failing_condition {
                    None => "condition (I) holds".to_string(),
                    Some(f) => format!("condition (I) fails at {f}"),
                };
                let label = if run == 1 { format!("M_{}", j + 1) } else { format!("M_{}..M_{}", j + 1, j + run) };
                writeln!(s, "  {label} = {{{set}}}  {verdict}").unwrap();
                j += run;
            }
        }
        if let (Some(t), Some(ok)) = (&self.orders, self.orders_compatible) {
            let list: Vec<String> = t
                .iter()
                .map(|(p, o)| {
                    let set = o.above_zero().iter().rev().map(u32::to_string).collect::<Vec<_>>();
                    format!("p={p}: s={}, S={{{}}}", o.bound(), set.join(","))
                })
                .collect();
            writeln!(s, "excellent orders {}", if list.is_empty() { "none".into() } else { list.join("; ") }).unwrap();
            writeln!(s, "psi compatible  {ok}").unwrap();
        }
        if let (Some(a), Some(b)) = (self.saito_strong, self.saito_weak) {
            writeln!(s, "Saito strong    {a}").unwrap();
            writeln!(s, "Saito weak      {b}").unwrap();
        }
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2() {
        let a = analyze(&WeightSystem::new(vec![1], 3).unwrap()).unwrap();
        assert_eq!(a.milnor, Value::from(2));
        assert_eq!(a.exponents, Some(vec![(1, 3, 1), (2, 3, 1)]));
        assert_eq!(a.covering, Some(vec![vec![3]]));
        assert!(a.blocks.as_ref().unwrap()[0].condition_i);
        assert_eq!(a.orders_compatible, Some(true));
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["psi"], serde_json::json!([[3, 1]]));
        assert_eq!(json["exponents"], serde_json::json!([[1, 3, 1], [2, 3, 1]]));
        assert_eq!(json["orders"], serde_json::json!({"3": {"s": 1, "S": [1]}}));
        assert!(a.to_text().contains("char. poly      Φ_3"));
    }

    #[test]
    fn first_table_row() {
        let a = analyze(&WeightSystem::new(vec![27, 16, 10, 1], 81).unwrap()).unwrap();
        assert!(a.c2bar && !a.c2);
        assert_eq!(a.milnor, Value::from(4615));
        assert_eq!(a.a_tuple, Some([2, 2, 4, 1, 4, 4]));
        assert!(a.saito_strong.is_none() && a.orders.is_none());
        let json = serde_json::to_value(&a).unwrap();
        assert!(json.get("saito_strong").is_none());
    }

    #[test]
    fn non_reduced_input() {
        let a = analyze(&WeightSystem::new(vec![2], 6).unwrap()).unwrap();
        assert_eq!(a.reduced, Reduced { weights: vec![1], d: 3 });
        assert_eq!((a.weights, a.d), (vec![2], 6));
    }

    #[test]
    fn failing_c2bar() {
        let a = analyze(&WeightSystem::new(vec![2, 2], 5).unwrap()).unwrap();
        assert!(!a.c2bar && a.exponents.is_none());
        assert_eq!(a.milnor, Value::from("9/4"));
    }

    #[test]
    fn limits() {
        let big = WeightSystem::new(vec![1; 13], 3).unwrap();
        assert!(matches!(analyze(&big), Err(Error::Resource(_))));
        let deep = WeightSystem::new(vec![1], 1_000_001).unwrap();
        assert!(matches!(analyze(&deep), Err(Error::Resource(_))));
    }

    #[test]
    fn c2bar_without_c2_at_265() {
        let a = analyze(&WeightSystem::new(vec![58, 33, 24, 1], 265).unwrap()).unwrap();
        assert!(a.c2bar && !a.c2);
        assert_eq!(a.milnor, Value::from(66516));
    }
}
