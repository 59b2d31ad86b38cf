//! Offline Euclidean distances injected as numeric fluents.

use std::collections::BTreeMap;

use crate::ast::{is_identifier, FunctionTerm, InitElement, InitValue, Name, Number, Problem, Term, Type};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DistanceError {
    #[error("object `{object}` has some coordinates but no `{axis}` value")]
    PartialCoordinates { object: Name, axis: Name },
    #[error("`({function} {object})` is assigned more than once")]
    DuplicateCoordinate { function: Name, object: Name },
    #[error("coordinate `({function} {object})` is not a finite number")]
    NonFiniteCoordinate { function: Name, object: Name },
    #[error("points mix 2D and 3D coordinates (`{two_d}` has no z, `{three_d}` has one)")]
    MixedDimensionality { two_d: Name, three_d: Name },
    #[error("the problem already assigns `{0}`; pass the overwrite option to replace those values")]
    ExistingDistances(Name),
    #[error("invalid distance configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: Option<f64>,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y, z: None }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Point {
        Point { x, y, z: Some(z) }
    }
}

pub const MAX_DECIMALS: u32 = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceConfig {
    pub x_function: Name,
    pub y_function: Name,
    /// Read when present; `None` restricts points to the plane.
    pub z_function: Option<Name>,
    pub distance_function: Name,
    /// Only objects declared with exactly this type get distances.
    pub target_type: Option<Name>,
    pub decimal_places: u32,
    /// Emit both `(a b)` and `(b a)`.
    pub symmetric: bool,
    /// Replace existing distance assignments instead of failing.
    pub overwrite: bool,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            x_function: Name::new("x-pos"),
            y_function: Name::new("y-pos"),
            z_function: Some(Name::new("z-pos")),
            distance_function: Name::new("distance"),
            target_type: None,
            decimal_places: 3,
            symmetric: true,
            overwrite: false,
        }
    }
}

impl DistanceConfig {
    pub fn validate(&self) -> Result<(), DistanceError> {
        if self.decimal_places > MAX_DECIMALS {
            return Err(DistanceError::InvalidConfig(format!(
                "decimal places must be at most {MAX_DECIMALS}, got {}",
                self.decimal_places
            )));
        }
        let names = [Some(&self.x_function), Some(&self.y_function), self.z_function.as_ref()]
            .into_iter()
            .flatten()
            .chain([&self.distance_function])
            .chain(self.target_type.as_ref());
        for n in names {
            if !is_identifier(n.as_str()) {
                return Err(DistanceError::InvalidConfig(format!("`{n}` is not a valid PDDL name")));
            }
        }
        Ok(())
    }

    fn axes(&self) -> Vec<&Name> {
        [Some(&self.x_function), Some(&self.y_function), self.z_function.as_ref()]
            .into_iter()
            .flatten()
            .collect()
    }
}

/// Unordered pairwise distances, stored once per pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DistanceTable {
    objects: Vec<Name>,
    entries: BTreeMap<(Name, Name), f64>,
}

impl DistanceTable {
    /// Objects in the order distances are emitted.
    pub fn objects(&self) -> &[Name] {
        &self.objects
    }

    pub fn get(&self, a: &Name, b: &Name) -> Option<f64> {
        if a == b {
            return self.objects.contains(a).then_some(0.0);
        }
        let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        self.entries.get(&key).copied()
    }

    pub fn pair_count(&self) -> usize {
        self.entries.len()
    }
}

/// Coordinates from `(= (<axis> obj) n)` init assignments.
pub fn extract_coordinates(p: &Problem, cfg: &DistanceConfig) -> Result<BTreeMap<Name, Point>, DistanceError> {
    let axes = cfg.axes();
    // object -> per-axis value
    let mut raw: BTreeMap<Name, [Option<f64>; 3]> = BTreeMap::new();
    for el in &p.init {
        let InitElement::Assign(FunctionTerm { name, args }, InitValue::Number(n)) = el else {
            continue;
        };
        let Some(axis) = axes.iter().position(|a| *a == name) else {
            continue;
        };
        let [Term::Name(object)] = args.as_slice() else {
            continue;
        };
        let slot = &mut raw.entry(object.clone()).or_default()[axis];
        if slot.is_some() {
            return Err(DistanceError::DuplicateCoordinate { function: name.clone(), object: object.clone() });
        }
        if !n.value().is_finite() {
            return Err(DistanceError::NonFiniteCoordinate { function: name.clone(), object: object.clone() });
        }
        *slot = Some(n.value());
    }

    let wanted = cfg.target_type.as_ref().map(|t| objects_of_type(p, t));
    let mut points = BTreeMap::new();
    for (object, v) in raw {
        if wanted.as_ref().is_some_and(|w| !w.contains(&object)) {
            continue;
        }
        let missing = |i: usize| DistanceError::PartialCoordinates { object: object.clone(), axis: axes[i].clone() };
        let x = v[0].ok_or_else(|| missing(0))?;
        let y = v[1].ok_or_else(|| missing(1))?;
        points.insert(object.clone(), Point { x, y, z: v[2] });
    }
    Ok(points)
}

fn objects_of_type(p: &Problem, ty: &Name) -> Vec<Name> {
    p.objects
        .iter()
        .filter(|g| matches!(&g.parent_type, Type::Named(t) if t == ty))
        .flat_map(|g| g.items.iter().cloned())
        .collect()
}

pub fn compute_distances(points: &BTreeMap<Name, Point>) -> Result<DistanceTable, DistanceError> {
    let with_z = points.iter().find(|(_, p)| p.z.is_some());
    let without_z = points.iter().find(|(_, p)| p.z.is_none());
    if let (Some((three_d, _)), Some((two_d, _))) = (with_z, without_z) {
        return Err(DistanceError::MixedDimensionality { two_d: two_d.clone(), three_d: three_d.clone() });
    }
    let list: Vec<(&Name, &Point)> = points.iter().collect();
    let mut entries = BTreeMap::new();
    for (i, (a, pa)) in list.iter().enumerate() {
        for (b, pb) in &list[i + 1..] {
            let dz = pa.z.zip(pb.z).map_or(0.0, |(za, zb)| za - zb);
            let (dx, dy) = (pa.x - pb.x, pa.y - pb.y);
            entries.insert(((*a).clone(), (*b).clone()), (dx * dx + dy * dy + dz * dz).sqrt());
        }
    }
    Ok(DistanceTable { objects: points.keys().cloned().collect(), entries })
}

/// Append `(= (distance a b) v)` for every ordered pair (or every unordered
/// pair when not symmetric), keeping existing init elements in order.
pub fn inject_distances(p: &Problem, t: &DistanceTable, cfg: &DistanceConfig) -> Result<Problem, DistanceError> {
    cfg.validate()?;
    let is_distance = |el: &InitElement| {
        matches!(el, InitElement::Assign(f, _) if f.name == cfg.distance_function)
    };
    if !cfg.overwrite && p.init.iter().any(is_distance) {
        return Err(DistanceError::ExistingDistances(cfg.distance_function.clone()));
    }
    let mut out = p.clone();
    out.init.retain(|el| !is_distance(el));
    let objs = t.objects();
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            if i == j || (!cfg.symmetric && j < i) {
                continue;
            }
            let d = t.get(a, b).expect("pair present in table");
            let f = FunctionTerm {
                name: cfg.distance_function.clone(),
                args: vec![Term::Name(a.clone()), Term::Name(b.clone())],
            };
            let v = Number::with_decimals(d, cfg.decimal_places as usize);
            out.init.push(InitElement::Assign(f, InitValue::Number(v)));
        }
    }
    Ok(out)
}

/// Extract, compute and inject in one step.
pub fn add_distances(p: &Problem, cfg: &DistanceConfig) -> Result<Problem, DistanceError> {
    cfg.validate()?;
    let points = extract_coordinates(p, cfg)?;
    let table = compute_distances(&points)?;
    inject_distances(p, &table, cfg)
}
