use crate::order::{pareto_filter, pareto_max, Antichain, Element, Orientation, Poset};

use super::DpiError;

/// One implementation of a design problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Implementation {
    pub label: String,
    pub prov: Element,
    pub req: Element,
}

impl Implementation {
    pub fn new(label: impl Into<String>, prov: Element, req: Element) -> Self {
        Self {
            label: label.into(),
            prov,
            req,
        }
    }
}

/// A design problem with a finite implementation set.
#[derive(Clone, Debug, PartialEq)]
pub struct Dpi {
    fun_poset: Poset,
    res_poset: Poset,
    fun_ports: Vec<String>,
    res_ports: Vec<String>,
    impls: Vec<Implementation>,
}

fn default_ports(p: &Poset, prefix: &str) -> Vec<String> {
    match p {
        Poset::Product(ps) => (0..ps.len()).map(|k| format!("{prefix}{k}")).collect(),
        _ => vec![prefix.to_string()],
    }
}

fn port_count(p: &Poset) -> usize {
    match p {
        Poset::Product(ps) => ps.len(),
        _ => 1,
    }
}

impl Dpi {
    pub fn new(fun_poset: Poset, res_poset: Poset, impls: Vec<Implementation>) -> Result<Self, DpiError> {
        for (k, imp) in impls.iter().enumerate() {
            if impls[..k].iter().any(|o| o.label == imp.label) {
                return Err(DpiError::DuplicateLabel(imp.label.clone()));
            }
            fun_poset
                .check(&imp.prov)
                .map_err(|e| DpiError::BadImplementation(imp.label.clone(), e.to_string()))?;
            res_poset
                .check(&imp.req)
                .map_err(|e| DpiError::BadImplementation(imp.label.clone(), e.to_string()))?;
        }
        Ok(Self {
            fun_ports: default_ports(&fun_poset, "f"),
            res_ports: default_ports(&res_poset, "r"),
            fun_poset,
            res_poset,
            impls,
        })
    }

    /// Catalog over `R̄≥0^m -> R̄≥0^n` with named ports.
    pub fn from_reals<S: AsRef<str>>(
        fun_ports: &[S],
        res_ports: &[S],
        rows: Vec<(String, Vec<f64>, Vec<f64>)>,
    ) -> Result<Self, DpiError> {
        let impls = rows
            .into_iter()
            .map(|(l, p, r)| Implementation::new(l, Element::reals(&p), Element::reals(&r)))
            .collect();
        Dpi::new(
            Poset::reals_product(fun_ports.len()),
            Poset::reals_product(res_ports.len()),
            impls,
        )?
        .with_ports(fun_ports, res_ports)
    }

    pub fn with_ports<S: AsRef<str>>(mut self, fun: &[S], res: &[S]) -> Result<Self, DpiError> {
        if fun.len() != port_count(&self.fun_poset) || res.len() != port_count(&self.res_poset) {
            return Err(DpiError::Arity(format!(
                "port names ({} fun, {} res) do not match posets ({} fun, {} res)",
                fun.len(),
                res.len(),
                port_count(&self.fun_poset),
                port_count(&self.res_poset)
            )));
        }
        self.fun_ports = fun.iter().map(|s| s.as_ref().to_string()).collect();
        self.res_ports = res.iter().map(|s| s.as_ref().to_string()).collect();
        Ok(self)
    }

    pub fn functionality_poset(&self) -> &Poset {
        &self.fun_poset
    }

    pub fn resource_poset(&self) -> &Poset {
        &self.res_poset
    }

    pub fn fun_ports(&self) -> &[String] {
        &self.fun_ports
    }

    pub fn res_ports(&self) -> &[String] {
        &self.res_ports
    }

    pub fn implementations(&self) -> &[Implementation] {
        &self.impls
    }

    pub fn is_empty(&self) -> bool {
        self.impls.is_empty()
    }

    /// Labels of implementations with `prov ≽ f` and `req ≼ r`.
    pub fn evaluate(&self, f: &Element, r: &Element) -> Result<Vec<String>, DpiError> {
        self.fun_poset.check(f)?;
        self.res_poset.check(r)?;
        let mut out = Vec::new();
        for imp in &self.impls {
            if self.fun_poset.leq(f, &imp.prov)? && self.res_poset.leq(&imp.req, r)? {
                out.push(imp.label.clone());
            }
        }
        Ok(out)
    }

    /// Minimal resources providing `f`, each with the label of one implementation.
    pub fn h_witnessed(&self, f: &Element) -> Result<Vec<(Element, String)>, DpiError> {
        self.fun_poset.check(f)?;
        let mut items = Vec::new();
        for imp in &self.impls {
            if self.fun_poset.leq(f, &imp.prov)? {
                items.push((imp.req.clone(), imp.label.clone()));
            }
        }
        Ok(pareto_filter(&self.res_poset, items, Orientation::Minimal)?)
    }

    /// Minimal antichain of resources providing `f`.
    pub fn h(&self, f: &Element) -> Result<Antichain, DpiError> {
        let items = self.h_witnessed(f)?;
        Ok(crate::order::pareto_min(
            &self.res_poset,
            items.into_iter().map(|(p, _)| p).collect(),
        )?)
    }

    /// Maximal antichain of functionalities provided with resources `r`.
    pub fn h_prime(&self, r: &Element) -> Result<Antichain, DpiError> {
        self.res_poset.check(r)?;
        let mut pts = Vec::new();
        for imp in &self.impls {
            if self.res_poset.leq(&imp.req, r)? {
                pts.push(imp.prov.clone());
            }
        }
        Ok(pareto_max(&self.fun_poset, pts)?)
    }

    /// Maximal functionalities with labels.
    pub fn h_prime_witnessed(&self, r: &Element) -> Result<Vec<(Element, String)>, DpiError> {
        self.res_poset.check(r)?;
        let mut items = Vec::new();
        for imp in &self.impls {
            if self.res_poset.leq(&imp.req, r)? {
                items.push((imp.prov.clone(), imp.label.clone()));
            }
        }
        Ok(pareto_filter(&self.fun_poset, items, Orientation::Maximal)?)
    }
}

/// `a` then `b`: what `a` requires is provided by `b`.
///
/// The composite provides `a`'s functionalities and requires `b`'s
/// resources; the pair `(i, j)` is admissible when `req_a(i) ≼ prov_b(j)`.
pub fn series(a: &Dpi, b: &Dpi) -> Result<Dpi, DpiError> {
    if a.res_poset != b.fun_poset {
        return Err(DpiError::PortMismatch(format!(
            "series interface: resources of the first problem ({:?}) differ from functionalities of the second ({:?})",
            a.res_poset, b.fun_poset
        )));
    }
    let mut impls = Vec::new();
    for i in &a.impls {
        for j in &b.impls {
            if a.res_poset.leq(&i.req, &j.prov)? {
                impls.push(Implementation::new(
                    format!("({};{})", i.label, j.label),
                    i.prov.clone(),
                    j.req.clone(),
                ));
            }
        }
    }
    Ok(Dpi {
        fun_poset: a.fun_poset.clone(),
        res_poset: b.res_poset.clone(),
        fun_ports: a.fun_ports.clone(),
        res_ports: b.res_ports.clone(),
        impls,
    })
}

/// Side by side; ports are paired, never summed.
pub fn parallel(a: &Dpi, b: &Dpi) -> Dpi {
    let mut impls = Vec::with_capacity(a.impls.len() * b.impls.len());
    for i in &a.impls {
        for j in &b.impls {
            impls.push(Implementation::new(
                format!("({}|{})", i.label, j.label),
                Element::Tuple(vec![i.prov.clone(), j.prov.clone()]),
                Element::Tuple(vec![i.req.clone(), j.req.clone()]),
            ));
        }
    }
    let names = |x: &[String], y: &[String], p: &str| -> Vec<String> {
        vec![format!("{p}a:{}", x.join("+")), format!("{p}b:{}", y.join("+"))]
    };
    Dpi {
        fun_poset: Poset::Product(vec![a.fun_poset.clone(), b.fun_poset.clone()]),
        res_poset: Poset::Product(vec![a.res_poset.clone(), b.res_poset.clone()]),
        fun_ports: names(&a.fun_ports, &b.fun_ports, ""),
        res_ports: names(&a.res_ports, &b.res_ports, ""),
        impls,
    }
}

/// Single implementation with `prov = req = x`.
pub fn identity_dpi(poset: &Poset, x: Element) -> Result<Dpi, DpiError> {
    Dpi::new(
        poset.clone(),
        poset.clone(),
        vec![Implementation::new("id", x.clone(), x)],
    )
}

/// Empty-product functionality and resource with one implementation.
pub fn unit_dpi() -> Dpi {
    Dpi {
        fun_poset: Poset::Product(vec![]),
        res_poset: Poset::Product(vec![]),
        fun_ports: vec![],
        res_ports: vec![],
        impls: vec![Implementation::new(
            "unit",
            Element::Tuple(vec![]),
            Element::Tuple(vec![]),
        )],
    }
}
