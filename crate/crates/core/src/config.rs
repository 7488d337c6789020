//! TOML configuration: the module registry and the group data.
//!
//! Paths inside a configuration file are relative to the directory holding
//! that file.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

use crate::expr::{flip_terms, parse_corpus, CorpusError, TermList};
use crate::group::{
    intertwiner_module, lower_bound, simple_module_for, FiniteGroup, FusionDims, GroupError, GroupSetAlgebra,
    IsoScalars, SimpleModuleDescriptor, StableSet,
};
use crate::modes::ModuleParams;
use crate::scalars::{QuadScalar, ScalarError};
use crate::singular::{common_params, SingularError};
use crate::zhu::{RelationSource, ZhuModule};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("{path}: {source}")]
    Corpus { path: PathBuf, source: CorpusError },
    #[error("{context}: bad scalar {text:?}: {source}")]
    Scalar { context: String, text: String, source: ScalarError },
    #[error("module {module}: no vector named {vector} in {path}")]
    UnknownVector { module: String, vector: String, path: PathBuf },
    #[error("module {module}: {source}")]
    Singular { module: String, source: SingularError },
    #[error("module {module}: the corpus fixes {found}, expected exactly one (h, k)")]
    AmbiguousParams { module: String, found: String },
    #[error("module {module}: configured (h, k) = ({h}, {k}) but the corpus gives ({h0}, {k0})")]
    ParamsMismatch { module: String, h: String, k: String, h0: String, k0: String },
    #[error("duplicate name {0}")]
    Duplicate(String),
    #[error("unknown module {0}")]
    UnknownModule(String),
    #[error("contragredient map is not an involution at {0}")]
    DualNotInvolution(String),
    #[error("group configuration: {0}")]
    Group(#[from] GroupError),
    #[error("group configuration: {0}")]
    Invalid(String),
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })
}

fn parse_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    toml::from_str(&read(path)?).map_err(|source| ConfigError::Toml { path: path.into(), source })
}

pub fn parse_scalar(context: &str, text: &str) -> Result<QuadScalar, ConfigError> {
    text.parse().map_err(|source| ConfigError::Scalar { context: context.into(), text: text.into(), source })
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

// --- registry --------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryFile {
    group: Option<String>,
    #[serde(default, rename = "module")]
    modules: Vec<ModuleEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleEntry {
    name: String,
    corpus: String,
    #[serde(default)]
    flip: bool,
    eliminator: Option<String>,
    d: usize,
    #[serde(default)]
    relations: Vec<RelationEntry>,
    dual: String,
    h: Option<String>,
    k: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationEntry {
    vector: String,
    name: Option<String>,
    #[serde(default)]
    flip: bool,
    #[serde(default)]
    depth: usize,
}

/// A registry module with its parameters recovered from its corpus.
#[derive(Debug)]
pub struct RegisteredModule {
    pub name: String,
    pub params: ModuleParams,
    pub dual: String,
    pub corpus_path: PathBuf,
    /// Every corpus vector of the module as used, after flips.
    pub vectors: Vec<(String, TermList)>,
    pub zhu: ZhuModule,
}

#[derive(Debug)]
pub struct Registry {
    pub path: PathBuf,
    pub modules: Vec<RegisteredModule>,
    pub group_path: Option<PathBuf>,
}

impl Registry {
    /// Load the registry, recover each module's `(h, k)` from its corpus
    /// and cross-check any configured values.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let file: RegistryFile = parse_toml(path)?;
        let dir = base_dir(path);
        let mut modules: Vec<RegisteredModule> = Vec::new();
        for entry in file.modules {
            if modules.iter().any(|m| m.name == entry.name) {
                return Err(ConfigError::Duplicate(entry.name));
            }
            modules.push(resolve_module(&dir, entry)?);
        }
        for m in &modules {
            let dual = modules.iter().find(|x| x.name == m.dual).ok_or_else(|| ConfigError::UnknownModule(m.dual.clone()))?;
            if dual.dual != m.name {
                return Err(ConfigError::DualNotInvolution(m.name.clone()));
            }
        }
        Ok(Registry { path: path.into(), modules, group_path: file.group.map(|g| dir.join(g)) })
    }

    pub fn get(&self, name: &str) -> Result<&RegisteredModule, ConfigError> {
        self.modules.iter().find(|m| m.name == name).ok_or_else(|| ConfigError::UnknownModule(name.into()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.modules.iter().map(|m| m.name.as_str()).collect()
    }

    pub fn dual(&self, name: &str) -> Result<&str, ConfigError> {
        Ok(self.get(name)?.dual.as_str())
    }
}

fn resolve_module(dir: &Path, e: ModuleEntry) -> Result<RegisteredModule, ConfigError> {
    let corpus_path = dir.join(&e.corpus);
    let records = parse_corpus(&read(&corpus_path)?).map_err(|source| ConfigError::Corpus { path: corpus_path.clone(), source })?;
    let lookup = |name: &str, flip: bool| -> Result<TermList, ConfigError> {
        let r = records.iter().find(|r| r.name == name).ok_or_else(|| ConfigError::UnknownVector {
            module: e.name.clone(),
            vector: name.into(),
            path: corpus_path.clone(),
        })?;
        Ok(if flip ^ e.flip { flip_terms(&r.terms) } else { r.terms.clone() })
    };
    let mut vectors = Vec::new();
    let eliminator = match &e.eliminator {
        Some(n) => {
            let t = lookup(n, false)?;
            vectors.push((n.clone(), t.clone()));
            Some(t)
        }
        None => None,
    };
    let mut relations = Vec::new();
    for r in &e.relations {
        let name = r.name.clone().unwrap_or_else(|| r.vector.clone());
        let t = lookup(&r.vector, r.flip)?;
        vectors.push((name.clone(), t.clone()));
        relations.push(RelationSource { name, vector: t, depth: r.depth });
    }
    let all: Vec<TermList> = vectors.iter().map(|(_, t)| t.clone()).collect();
    let sols = common_params(&all).map_err(|source| ConfigError::Singular { module: e.name.clone(), source })?;
    if sols.points.len() != 1 {
        let found = sols.points.iter().map(|p| format!("({}, {})", p.h, p.k)).collect::<Vec<_>>().join(", ");
        return Err(ConfigError::AmbiguousParams { module: e.name.clone(), found: format!("[{found}]") });
    }
    let params = sols.points[0].clone();
    if e.h.is_some() || e.k.is_some() {
        let ctx = format!("module {}", e.name);
        let h = e.h.as_deref().map(|s| parse_scalar(&ctx, s)).transpose()?.unwrap_or_else(|| params.h.clone());
        let k = e.k.as_deref().map(|s| parse_scalar(&ctx, s)).transpose()?.unwrap_or_else(|| params.k.clone());
        if h != params.h || k != params.k {
            return Err(ConfigError::ParamsMismatch {
                module: e.name.clone(),
                h: h.to_string(),
                k: k.to_string(),
                h0: params.h.to_string(),
                k0: params.k.to_string(),
            });
        }
    }
    let zhu = ZhuModule::new(e.name.clone(), params.clone(), eliminator, e.d, relations);
    Ok(RegisteredModule { name: e.name, params, dual: e.dual, corpus_path, vectors, zhu })
}

// --- group -----------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    group: GroupEntry,
    #[serde(default, rename = "set")]
    sets: Vec<SetEntry>,
    #[serde(default)]
    fusion: Vec<String>,
    #[serde(default)]
    iso: Vec<IsoEntry>,
    #[serde(default, rename = "module")]
    modules: Vec<GroupModuleEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupEntry {
    cyclic: Option<usize>,
    generator: Option<String>,
    names: Option<Vec<String>>,
    table: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetEntry {
    name: String,
    labels: Vec<String>,
    /// One row per label: the image of the label under each group element.
    action: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IsoEntry {
    triple: String,
    element: String,
    value: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupModuleEntry {
    name: String,
    set: String,
    label: String,
    character: Vec<String>,
}

/// Where a module of the fixed-point algebra sits in the group data.
#[derive(Clone, Debug)]
pub struct ModuleSlot {
    pub set: usize,
    pub label: usize,
    pub character: Vec<QuadScalar>,
}

#[derive(Debug)]
pub struct GroupConfig {
    pub group: FiniteGroup,
    pub sets: Vec<StableSet>,
    pub fusion: FusionDims,
    pub iso: IsoScalars,
    pub modules: HashMap<String, ModuleSlot>,
    algebras: Vec<OnceLock<Result<GroupSetAlgebra, GroupError>>>,
}

impl GroupConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_file(parse_toml(path)?)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_file(toml::from_str(text).map_err(|source| ConfigError::Toml { path: "<inline>".into(), source })?)
    }

    fn from_file(file: GroupFile) -> Result<Self, ConfigError> {
        let g = &file.group;
        let group = match (g.cyclic, &g.table) {
            (Some(n), None) if n > 0 => FiniteGroup::cyclic(n, g.generator.as_deref().unwrap_or("g")),
            (None, Some(t)) => {
                let names = g.names.clone().unwrap_or_else(|| (0..t.len()).map(|i| format!("g{i}")).collect());
                FiniteGroup::from_table(names, t.clone())?
            }
            _ => return Err(ConfigError::Invalid("give exactly one of `cyclic` and `table`".into())),
        };
        let mut sets = Vec::new();
        let mut all_labels = BTreeSet::new();
        for s in file.sets {
            for l in &s.labels {
                if !all_labels.insert(l.clone()) {
                    return Err(ConfigError::Duplicate(l.clone()));
                }
            }
            let idx = |l: &str| {
                s.labels.iter().position(|x| x == l).ok_or_else(|| GroupError::UnknownLabel(l.into()))
            };
            let action =
                s.action.iter().map(|row| row.iter().map(|l| idx(l)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
            sets.push(StableSet::new(&group, s.name, s.labels, action)?);
        }
        let mut fusion = FusionDims::new();
        for line in &file.fusion {
            let (body, dim) = match line.split_once(':') {
                Some((b, d)) => {
                    (b, d.trim().parse::<usize>().map_err(|_| ConfigError::Invalid(format!("bad fusion entry {line:?}")))?)
                }
                None => (line.as_str(), 1),
            };
            let parts: Vec<&str> = body.split_whitespace().collect();
            let [a, b, c] = parts[..] else {
                return Err(ConfigError::Invalid(format!("fusion entry {line:?} needs `L1 L2 L3 [: n]`")));
            };
            for l in [a, b, c] {
                if !all_labels.contains(l) {
                    return Err(GroupError::UnknownLabel(l.into()).into());
                }
            }
            fusion.insert((a.into(), b.into(), c.into()), dim);
        }
        let mut iso = IsoScalars::new();
        for e in &file.iso {
            let parts: Vec<&str> = e.triple.split_whitespace().collect();
            let [a, b, c] = parts[..] else {
                return Err(ConfigError::Invalid(format!("iso triple {:?} needs three labels", e.triple)));
            };
            let el = group.element(&e.element).ok_or_else(|| ConfigError::Invalid(format!("unknown element {}", e.element)))?;
            let v = parse_scalar(&format!("iso {}", e.triple), &e.value)?;
            iso.entry((a.into(), b.into(), c.into())).or_default().insert(el, v);
        }
        let mut modules = HashMap::new();
        for m in file.modules {
            let set = sets
                .iter()
                .position(|s| s.name() == m.set)
                .ok_or_else(|| ConfigError::Invalid(format!("module {}: unknown set {}", m.name, m.set)))?;
            let label = sets[set].label_index(&m.label)?;
            let character =
                m.character.iter().map(|c| parse_scalar(&format!("module {}", m.name), c)).collect::<Result<Vec<_>, _>>()?;
            if modules.insert(m.name.clone(), ModuleSlot { set, label, character }).is_some() {
                return Err(ConfigError::Duplicate(m.name));
            }
        }
        let algebras = sets.iter().map(|_| OnceLock::new()).collect();
        let cfg = GroupConfig { group, sets, fusion, iso, modules, algebras };
        for name in cfg.modules.keys() {
            cfg.simple_module(name)?;
        }
        Ok(cfg)
    }

    pub fn set_index(&self, name: &str) -> Result<usize, ConfigError> {
        self.sets.iter().position(|s| s.name() == name).ok_or_else(|| ConfigError::Invalid(format!("unknown set {name}")))
    }

    pub fn algebra(&self, set: usize) -> Result<&GroupSetAlgebra, GroupError> {
        self.algebras[set].get_or_init(|| GroupSetAlgebra::build(&self.group, &self.sets[set])).as_ref().map_err(Clone::clone)
    }

    /// The simple `𝒜`-module attached to a module name.
    pub fn simple_module(&self, name: &str) -> Result<SimpleModuleDescriptor, ConfigError> {
        let slot = self.modules.get(name).ok_or_else(|| ConfigError::UnknownModule(name.into()))?;
        Ok(simple_module_for(self.algebra(slot.set)?, slot.label, &slot.character)?)
    }

    /// Lower bound for `N(l3; l1, l2)` from the intertwiner module.
    pub fn lower_bound(&self, l1: &str, l2: &str, l3: &str) -> Result<usize, ConfigError> {
        let slot = |n: &str| self.modules.get(n).ok_or_else(|| ConfigError::UnknownModule(n.into()));
        let (s1, s2, s3) = (slot(l1)?.set, slot(l2)?.set, slot(l3)?.set);
        let w1 = self.simple_module(l1)?;
        let w2 = self.simple_module(l2)?;
        let w3 = self.simple_module(l3)?;
        let m = intertwiner_module(
            self.algebra(s1)?,
            self.algebra(s2)?,
            self.algebra(s3)?,
            &self.fusion,
            &self.iso,
            &w1,
            &w2,
        )?;
        Ok(lower_bound(&m, &w3)?)
    }
}
