//! Topology generators behind one trait, looked up by name at runtime.
//!
//! A generator is selected with a spec string `kind` or `kind:key=value,...`,
//! for example `er`, `ws:rewire_p=0.2` or `fractal:d=6.5`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal::{generate_points, FractalConfig};
use crate::topology::{
    build_radius_graph, gen_ba, gen_er, gen_grid, gen_tree, gen_ws, place_points, BaParams,
    CapacityModel, ErParams, Topology, TreeParams, WsParams, DEFAULT_AREA_M, DEFAULT_RADIUS_M,
    DEFAULT_RETRY_CAP,
};

/// Shared deployment settings every generator sees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Site {
    pub n_nodes: usize,
    pub area_m: f64,
    pub radius_m: f64,
    pub capacity: CapacityModel,
    pub retry_cap: u32,
}

impl Default for Site {
    fn default() -> Self {
        Self {
            n_nodes: 85,
            area_m: DEFAULT_AREA_M,
            radius_m: DEFAULT_RADIUS_M,
            capacity: CapacityModel::default(),
            retry_cap: DEFAULT_RETRY_CAP,
        }
    }
}

pub trait TopologyGenerator: Send + Sync {
    /// Stable label, used in output rows.
    fn label(&self) -> String;

    /// Fractal dimension when the layout has one.
    fn fractal_dimension(&self) -> Option<f64> {
        None
    }

    /// Whether `seed` influences the output.
    fn is_stochastic(&self) -> bool {
        false
    }

    fn generate(&self, site: &Site, seed: u64) -> Result<Topology>;
}

/// Parsed `kind:key=value,...` selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GeneratorSpec {
    pub kind: String,
    pub params: BTreeMap<String, f64>,
}

impl GeneratorSpec {
    pub fn new(kind: &str) -> Self {
        Self {
            kind: kind.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn fractal(d_frac: f64) -> Self {
        let mut s = Self::new("fractal");
        s.params.insert("d".into(), d_frac);
        s
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn get(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    fn get_usize(&self, key: &'static str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) if v >= 0.0 && v.fract() == 0.0 => Ok(Some(v as usize)),
            Some(v) => Err(Error::invalid(key, format!("expected a whole number, got {v}"))),
        }
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidParameter {
                name: "generator",
                reason: format!("`{}` does not take parameter `{k}`", self.kind),
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        let mut sep = ':';
        for (k, v) in &self.params {
            write!(f, "{sep}{k}={v}")?;
            sep = ',';
        }
        Ok(())
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k.trim(), Some(r)),
            None => (s.trim(), None),
        };
        if kind.is_empty() {
            return Err(Error::invalid("generator", "empty generator name"));
        }
        let mut spec = GeneratorSpec::new(kind);
        for pair in rest.into_iter().flat_map(|r| r.split(',')) {
            let pair = pair.trim();
            if pair.is_empty() {
                continue;
            }
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::invalid("generator", format!("expected key=value, got `{pair}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::invalid("generator", format!("`{v}` is not a number")))?;
            spec.params.insert(k.trim().to_string(), v);
        }
        Ok(spec)
    }
}

impl TryFrom<String> for GeneratorSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GeneratorSpec> for String {
    fn from(s: GeneratorSpec) -> String {
        s.to_string()
    }
}

pub type Factory = fn(&GeneratorSpec) -> Result<Box<dyn TopologyGenerator>>;

/// Name-to-factory table of topology generators.
pub struct GeneratorRegistry {
    factories: BTreeMap<&'static str, Factory>,
}

impl Default for GeneratorRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

impl GeneratorRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// Fractal layouts plus the five classical baselines.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register("fractal", FractalLayout::from_spec);
        r.register("er", ErdosRenyi::from_spec);
        r.register("ws", WattsStrogatz::from_spec);
        r.register("ba", BarabasiAlbert::from_spec);
        r.register("grid", Grid::from_spec);
        r.register("tree", BalancedTree::from_spec);
        r
    }

    pub fn register(&mut self, kind: &'static str, factory: Factory) {
        self.factories.insert(kind, factory);
    }

    pub fn kinds(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }

    pub fn create(&self, spec: &GeneratorSpec) -> Result<Box<dyn TopologyGenerator>> {
        let factory = self
            .factories
            .get(spec.kind.as_str())
            .ok_or_else(|| Error::UnknownGenerator(spec.kind.clone()))?;
        factory(spec)
    }

    pub fn create_from_str(&self, spec: &str) -> Result<Box<dyn TopologyGenerator>> {
        self.create(&spec.parse()?)
    }
}

/// Quadrant-recursive layout of fractal dimension `d`, wired by radius.
#[derive(Debug, Clone, Copy)]
pub struct FractalLayout {
    pub d_frac: f64,
}

impl FractalLayout {
    fn from_spec(spec: &GeneratorSpec) -> Result<Box<dyn TopologyGenerator>> {
        spec.reject_unknown(&["d"])?;
        let d_frac = spec
            .get("d")
            .ok_or_else(|| Error::invalid("d", "fractal generator needs `d`"))?;
        FractalConfig::new(1, d_frac)?;
        Ok(Box::new(FractalLayout { d_frac }))
    }
}

impl TopologyGenerator for FractalLayout {
    fn label(&self) -> String {
        format!("fractal:d={}", self.d_frac)
    }

    fn fractal_dimension(&self) -> Option<f64> {
        Some(self.d_frac)
    }

    fn generate(&self, site: &Site, _seed: u64) -> Result<Topology> {
        let points = generate_points(&FractalConfig::new(site.n_nodes, self.d_frac)?)?;
        let positions = place_points(&points, site.area_m)?;
        let mut topo = build_radius_graph(&positions, site.area_m, site.radius_m, &site.capacity)?;
        topo.meta.generator = "fractal".into();
        topo.meta.params.insert("d_frac".into(), self.d_frac.into());
        Ok(topo)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ErdosRenyi {
    pub mean_degree: f64,
}

impl ErdosRenyi {
    fn from_spec(spec: &GeneratorSpec) -> Result<Box<dyn TopologyGenerator>> {
        spec.reject_unknown(&["mean_degree"])?;
        Ok(Box::new(ErdosRenyi {
            mean_degree: spec
                .get("mean_degree")
                .unwrap_or(ErParams::default().mean_degree),
        }))
    }
}

impl TopologyGenerator for ErdosRenyi {
    fn label(&self) -> String {
        "er".into()
    }

    fn is_stochastic(&self) -> bool {
        true
    }

    fn generate(&self, site: &Site, seed: u64) -> Result<Topology> {
        let params = ErParams {
            n: site.n_nodes,
            mean_degree: self.mean_degree,
        };
        gen_er(params, site.area_m, &site.capacity, seed, site.retry_cap)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WattsStrogatz {
    pub k: usize,
    pub rewire_p: f64,
}

impl WattsStrogatz {
    fn from_spec(spec: &GeneratorSpec) -> Result<Box<dyn TopologyGenerator>> {
        spec.reject_unknown(&["k", "rewire_p"])?;
        let d = WsParams::default();
        Ok(Box::new(WattsStrogatz {
            k: spec.get_usize("k")?.unwrap_or(d.k),
            rewire_p: spec.get("rewire_p").unwrap_or(d.rewire_p),
        }))
    }
}

impl TopologyGenerator for WattsStrogatz {
    fn label(&self) -> String {
        "ws".into()
    }

    fn is_stochastic(&self) -> bool {
        true
    }

    fn generate(&self, site: &Site, seed: u64) -> Result<Topology> {
        let params = WsParams {
            n: site.n_nodes,
            k: self.k,
            rewire_p: self.rewire_p,
        };
        gen_ws(params, site.area_m, &site.capacity, seed, site.retry_cap)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BarabasiAlbert {
    pub m: usize,
}

impl BarabasiAlbert {
    fn from_spec(spec: &GeneratorSpec) -> Result<Box<dyn TopologyGenerator>> {
        spec.reject_unknown(&["m"])?;
        Ok(Box::new(BarabasiAlbert {
            m: spec.get_usize("m")?.unwrap_or(BaParams::default().m),
        }))
    }
}

impl TopologyGenerator for BarabasiAlbert {
    fn label(&self) -> String {
        "ba".into()
    }

    fn is_stochastic(&self) -> bool {
        true
    }

    fn generate(&self, site: &Site, seed: u64) -> Result<Topology> {
        let params = BaParams {
            n: site.n_nodes,
            m: self.m,
        };
        gen_ba(params, site.area_m, &site.capacity, seed, site.retry_cap)
    }
}

/// Fixed 85-node lattice; ignores `site.n_nodes`.
#[derive(Debug, Clone, Copy)]
pub struct Grid;

impl Grid {
    fn from_spec(spec: &GeneratorSpec) -> Result<Box<dyn TopologyGenerator>> {
        spec.reject_unknown(&[])?;
        Ok(Box::new(Grid))
    }
}

impl TopologyGenerator for Grid {
    fn label(&self) -> String {
        "grid".into()
    }

    fn generate(&self, site: &Site, _seed: u64) -> Result<Topology> {
        gen_grid(site.area_m, &site.capacity)
    }
}

/// Balanced tree; node count follows from branching and height.
#[derive(Debug, Clone, Copy)]
pub struct BalancedTree {
    pub params: TreeParams,
}

impl BalancedTree {
    fn from_spec(spec: &GeneratorSpec) -> Result<Box<dyn TopologyGenerator>> {
        spec.reject_unknown(&["branching", "height"])?;
        let d = TreeParams::default();
        Ok(Box::new(BalancedTree {
            params: TreeParams {
                branching: spec.get_usize("branching")?.unwrap_or(d.branching),
                height: spec.get_usize("height")?.map_or(d.height, |h| h as u32),
            },
        }))
    }
}

impl TopologyGenerator for BalancedTree {
    fn label(&self) -> String {
        "tree".into()
    }

    fn generate(&self, site: &Site, _seed: u64) -> Result<Topology> {
        gen_tree(self.params, site.area_m, &site.capacity)
    }
}
