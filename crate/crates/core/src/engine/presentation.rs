use std::collections::BTreeMap;

use crate::coefficients::{GenericQ, QLaurent};

use super::{Algebra, EngineError, Monomial, NCElement};

/// Element that commutes with every PBW monomial up to a power of `q`:
/// `s * m = q^{weights . exps(m)} * m * s`.
#[derive(Debug, Clone)]
pub struct ScalarCommuter {
    pub name: String,
    /// `None` for a formal square root (see `square_root_of`).
    pub element: Option<NCElement<QLaurent>>,
    pub weights: Vec<i64>,
    /// For a formal `alpha` with `alpha^2 = s_k`, the index `k`.
    pub square_root_of: Option<usize>,
}

/// Generators in a fixed order together with one rewrite rule
/// `g_j g_i -> rhs` for every out-of-order pair `j > i`.
#[derive(Debug, Clone)]
pub struct Presentation {
    name: String,
    generators: Vec<String>,
    rules: BTreeMap<(usize, usize), NCElement<QLaurent>>,
    gradings: Vec<Vec<i64>>,
    commuters: Vec<ScalarCommuter>,
    named: BTreeMap<String, NCElement<QLaurent>>,
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        generators: Vec<String>,
        rules: BTreeMap<(usize, usize), NCElement<QLaurent>>,
    ) -> Result<Self, EngineError> {
        let n = generators.len();
        for &(j, i) in rules.keys() {
            if j >= n || i >= j {
                return Err(EngineError::BadRule(format!("({j}, {i})")));
            }
        }
        for j in 0..n {
            for i in 0..j {
                if !rules.contains_key(&(j, i)) {
                    return Err(EngineError::MissingRule(
                        generators[j].clone(),
                        generators[i].clone(),
                    ));
                }
            }
        }
        for rhs in rules.values() {
            if rhs.monomials().any(|m| m.ngens() != n) {
                return Err(EngineError::BadRule("arity mismatch".into()));
            }
        }
        Ok(Presentation {
            name: name.into(),
            generators,
            rules,
            gradings: Vec::new(),
            commuters: Vec::new(),
            named: BTreeMap::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn rule(&self, j: usize, i: usize) -> Option<&NCElement<QLaurent>> {
        self.rules.get(&(j, i))
    }

    pub fn rules(&self) -> &BTreeMap<(usize, usize), NCElement<QLaurent>> {
        &self.rules
    }

    /// Replace one rule; used to build deliberately broken systems.
    pub fn with_rule(mut self, j: usize, i: usize, rhs: NCElement<QLaurent>) -> Self {
        self.rules.insert((j, i), rhs);
        self
    }

    pub fn gradings(&self) -> &[Vec<i64>] {
        &self.gradings
    }

    /// Declare a `Z`-grading (one weight per generator). Every rule must be
    /// homogeneous for it.
    pub fn with_grading(mut self, weights: Vec<i64>) -> Result<Self, EngineError> {
        for (&(j, i), rhs) in &self.rules {
            let w = weights[j] + weights[i];
            if rhs.monomials().any(|m| m.weight(&weights) != w) {
                return Err(EngineError::InhomogeneousGrading(
                    self.generators[j].clone(),
                    self.generators[i].clone(),
                ));
            }
        }
        self.gradings.push(weights);
        Ok(self)
    }

    pub fn commuters(&self) -> &[ScalarCommuter] {
        &self.commuters
    }

    pub fn commuter_index(&self, name: &str) -> Option<usize> {
        self.commuters.iter().position(|c| c.name == name)
    }

    /// Register a scalar-commuting element after checking `s*m = q^e m*s`
    /// on every generator and every degree-2 PBW monomial.
    pub fn with_commuter(
        mut self,
        name: impl Into<String>,
        element: NCElement<QLaurent>,
        weights: Vec<i64>,
    ) -> Result<Self, EngineError> {
        let name = name.into();
        {
            let alg = Algebra::new(self.clone(), GenericQ);
            let n = self.ngens();
            let mut probes: Vec<Monomial> = (0..n).map(|g| Monomial::generator(n, g, 1)).collect();
            for i in 0..n {
                for j in i..n {
                    let mut m = Monomial::generator(n, i, 1);
                    m.set_exp(j, m.exp(j) + 1);
                    probes.push(m);
                }
            }
            for m in probes {
                let me = NCElement::term(m.clone(), QLaurent::one());
                let lhs = alg.mul(&element, &me);
                let rhs = alg.mul(&me, &element).scale(&GenericQ, &QLaurent::q_pow(m.weight(&weights)));
                if lhs != rhs {
                    return Err(EngineError::CommuterMismatch {
                        name,
                        probe: format!("{:?}", m),
                    });
                }
            }
        }
        self.commuters.push(ScalarCommuter {
            name,
            element: Some(element),
            weights,
            square_root_of: None,
        });
        Ok(self)
    }

    /// Register a formal square root `alpha` of an existing commuter.
    pub fn with_square_root(
        mut self,
        name: impl Into<String>,
        of: &str,
        weights: Vec<i64>,
    ) -> Result<Self, EngineError> {
        let k = self
            .commuter_index(of)
            .ok_or_else(|| EngineError::UnregisteredDenominator(of.to_string()))?;
        let doubled: Vec<i64> = weights.iter().map(|w| 2 * w).collect();
        if doubled != self.commuters[k].weights {
            return Err(EngineError::CommuterMismatch {
                name: name.into(),
                probe: "square of weights".into(),
            });
        }
        self.commuters.push(ScalarCommuter {
            name: name.into(),
            element: None,
            weights,
            square_root_of: Some(k),
        });
        Ok(self)
    }

    pub fn named(&self) -> &BTreeMap<String, NCElement<QLaurent>> {
        &self.named
    }

    pub fn named_element(&self, name: &str) -> Option<&NCElement<QLaurent>> {
        self.named.get(name)
    }

    pub fn with_named(mut self, name: impl Into<String>, e: NCElement<QLaurent>) -> Self {
        self.named.insert(name.into(), e);
        self
    }

    /// Restrict to the sub-presentation on the listed generators, if the
    /// rules among them close up.
    pub fn restrict(&self, name: &str, keep: &[usize]) -> Option<Presentation> {
        let n = keep.len();
        let mut rules = BTreeMap::new();
        for (a, &j) in keep.iter().enumerate() {
            for (b, &i) in keep.iter().enumerate().take(a) {
                let (hi, lo) = if j > i { (j, i) } else { (i, j) };
                debug_assert!(a > b);
                let rhs = self.rules.get(&(hi, lo))?;
                let mut out = NCElement::zero();
                for (m, c) in rhs.terms() {
                    let mut t = Monomial::one(n);
                    for (g, &e) in m.exponents().iter().enumerate() {
                        if e > 0 {
                            let pos = keep.iter().position(|&k| k == g)?;
                            t.set_exp(pos, e);
                        }
                    }
                    out.add_term(&GenericQ, t, c);
                }
                rules.insert((a, b), out);
            }
        }
        let gens = keep.iter().map(|&g| self.generators[g].clone()).collect();
        Presentation::new(name, gens, rules).ok()
    }
}
