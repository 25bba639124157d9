//! Problem-definition data model: scenes, floor-plans, furniture, and the
//! dimensional-category labeling rule.
//!
//! A scene pairs an empty floor-plan (walls, doors, windows) with the
//! furniture layout placed into it and a label classifying the room by its
//! governing dimension. All types validate their invariants at construction
//! and are immutable afterwards.

use crate::error::{Error, Result};
use crate::geom::{Point, Rect};

/// Main room categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoomType {
    Bedroom,
    Bathroom,
    Study,
}

impl RoomType {
    pub const ALL: [RoomType; 3] = [RoomType::Bedroom, RoomType::Bathroom, RoomType::Study];

    pub fn as_str(&self) -> &'static str {
        match self {
            RoomType::Bedroom => "bedroom",
            RoomType::Bathroom => "bathroom",
            RoomType::Study => "study",
        }
    }

    pub fn from_str(s: &str) -> Result<RoomType> {
        match s {
            "bedroom" => Ok(RoomType::Bedroom),
            "bathroom" => Ok(RoomType::Bathroom),
            "study" => Ok(RoomType::Study),
            other => Err(Error::Parse(format!("unknown room type `{other}`"))),
        }
    }
}

/// Which side of the room's bounding rectangle drives the dimensional
/// category. Nothing in the source data pins this down, so it stays a
/// config switch; the default is the shorter (constrained) side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoverningDimension {
    Shorter,
    Longer,
}

/// Per-room-type threshold tables for the dimensional category.
///
/// A table with thresholds `[t1, .., tk]` (strictly increasing) defines
/// `k + 1` bins: category 0 for `L < t1`, category i for `t_i <= L < t_{i+1}`
/// (inclusive on the left), and category k for `L >= tk`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelConfig {
    pub bedroom_thresholds: Vec<f64>,
    pub bathroom_thresholds: Vec<f64>,
    pub study_thresholds: Vec<f64>,
    pub governing: GoverningDimension,
}

impl Default for LabelConfig {
    fn default() -> Self {
        // Bedroom keeps the 2.7 / 3.4 split for tatami vs common vs
        // common-with-functionality and refines the top end into two more
        // bins; bathroom gets 5 bins, study 4, for 14 subcategories total.
        LabelConfig {
            bedroom_thresholds: vec![2.7, 3.4, 4.5, 5.2],
            bathroom_thresholds: vec![1.8, 2.2, 2.6, 3.0],
            study_thresholds: vec![2.4, 3.0, 3.8],
            governing: GoverningDimension::Shorter,
        }
    }
}

impl LabelConfig {
    pub fn validate(&self) -> Result<()> {
        for (rt, t) in [
            (RoomType::Bedroom, &self.bedroom_thresholds),
            (RoomType::Bathroom, &self.bathroom_thresholds),
            (RoomType::Study, &self.study_thresholds),
        ] {
            if t.is_empty() {
                return Err(Error::Config(format!(
                    "{} threshold table is empty",
                    rt.as_str()
                )));
            }
            if t.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                return Err(Error::Config(format!(
                    "{} thresholds must be positive and finite",
                    rt.as_str()
                )));
            }
            if t.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config(format!(
                    "{} thresholds must be strictly increasing",
                    rt.as_str()
                )));
            }
        }
        Ok(())
    }

    pub fn thresholds(&self, room_type: RoomType) -> &[f64] {
        match room_type {
            RoomType::Bedroom => &self.bedroom_thresholds,
            RoomType::Bathroom => &self.bathroom_thresholds,
            RoomType::Study => &self.study_thresholds,
        }
    }

    /// Number of dimensional subcategories for one room type.
    pub fn bins(&self, room_type: RoomType) -> usize {
        self.thresholds(room_type).len() + 1
    }

    /// Total subcategory count across all room types (14 by default).
    pub fn total_subcategories(&self) -> usize {
        RoomType::ALL.iter().map(|rt| self.bins(*rt)).sum()
    }

    /// Offset of a room type's first subcategory in the global index space.
    pub fn room_type_offset(&self, room_type: RoomType) -> usize {
        RoomType::ALL
            .iter()
            .take_while(|rt| **rt != room_type)
            .map(|rt| self.bins(*rt))
            .sum()
    }

    /// Global subcategory index of a label.
    pub fn global_index(&self, label: &RoomLabel) -> usize {
        self.room_type_offset(label.room_type) + label.dim_category
    }
}

/// Room label: the main type plus the dimensional subcategory within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoomLabel {
    pub room_type: RoomType,
    pub dim_category: usize,
}

impl RoomLabel {
    pub fn new(room_type: RoomType, dim_category: usize, config: &LabelConfig) -> Result<Self> {
        if dim_category >= config.bins(room_type) {
            return Err(Error::Domain(format!(
                "dim_category {dim_category} out of range for {} ({} bins)",
                room_type.as_str(),
                config.bins(room_type)
            )));
        }
        Ok(RoomLabel {
            room_type,
            dim_category,
        })
    }
}

/// Classifies a room by its governing dimension against the threshold
/// table of its room type. Total on positive dimensions; inclusive on the
/// left, so a length exactly at a threshold falls in the upper bin.
pub fn label_from_dimensions(
    bounds: &Rect,
    room_type: RoomType,
    config: &LabelConfig,
) -> Result<RoomLabel> {
    if !(bounds.width() > 0.0 && bounds.height() > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "room bounds must have positive dimensions, got {:.3} x {:.3}",
            bounds.width(),
            bounds.height()
        )));
    }
    let governing = match config.governing {
        GoverningDimension::Shorter => bounds.shorter_side(),
        GoverningDimension::Longer => bounds.longer_side(),
    };
    let thresholds = config.thresholds(room_type);
    let dim_category = thresholds.iter().take_while(|t| governing >= **t).count();
    Ok(RoomLabel {
        room_type,
        dim_category,
    })
}

/// One-hot encoding of a label over the global subcategory index space.
pub fn one_hot_label(label: &RoomLabel, config: &LabelConfig) -> Vec<f64> {
    let mut v = vec![0.0; config.total_subcategories()];
    v[config.global_index(label)] = 1.0;
    v
}

/// One entry of the fixed furniture-category table.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryInfo {
    pub name: String,
    /// Height assigned when decoding generated layouts (top-down work
    /// otherwise ignores heights).
    pub nominal_height: f64,
}

/// The fixed furniture-category table `category_id` indexes into.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryTable {
    entries: Vec<CategoryInfo>,
}

impl CategoryTable {
    pub fn new(entries: Vec<CategoryInfo>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Config("category table must not be empty".into()));
        }
        Ok(CategoryTable { entries })
    }

    pub fn from_names(names: &[&str]) -> Self {
        CategoryTable {
            entries: names
                .iter()
                .map(|n| CategoryInfo {
                    name: (*n).to_string(),
                    nominal_height: 0.8,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn name(&self, id: usize) -> Option<&str> {
        self.entries.get(id).map(|e| e.name.as_str())
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn nominal_height(&self, id: usize) -> f64 {
        self.entries.get(id).map(|e| e.nominal_height).unwrap_or(0.8)
    }

    pub fn check_id(&self, id: usize) -> Result<()> {
        if id < self.entries.len() {
            Ok(())
        } else {
            Err(Error::Dataset(format!(
                "unknown furniture category id {id} (table has {} entries)",
                self.entries.len()
            )))
        }
    }
}

impl Default for CategoryTable {
    fn default() -> Self {
        let entries = [
            ("bed", 0.45),
            ("wardrobe", 2.2),
            ("nightstand", 0.5),
            ("desk", 0.75),
            ("chair", 0.9),
            ("bookshelf", 1.9),
            ("toilet", 0.42),
            ("sink", 0.85),
            ("bathtub", 0.55),
            ("shower", 2.0),
            ("washing_machine", 0.85),
        ];
        CategoryTable {
            entries: entries
                .iter()
                .map(|(name, h)| CategoryInfo {
                    name: (*name).to_string(),
                    nominal_height: *h,
                })
                .collect(),
        }
    }
}

/// A furniture piece: category, center position and full size.
#[derive(Debug, Clone, PartialEq)]
pub struct FurnitureItem {
    pub category_id: usize,
    /// Center (x, y) in meters from the scene origin.
    pub position: Point,
    /// Full (length, width, height) in meters; length extends along x,
    /// width along y.
    pub size: (f64, f64, f64),
}

impl FurnitureItem {
    pub fn new(
        category_id: usize,
        position: Point,
        size: (f64, f64, f64),
        table: &CategoryTable,
    ) -> Result<Self> {
        table.check_id(category_id)?;
        if !(size.0 > 0.0 && size.1 > 0.0 && size.2 > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "furniture size components must be strictly positive, got {:?}",
                size
            )));
        }
        Ok(FurnitureItem {
            category_id,
            position,
            size,
        })
    }

    /// Top-down footprint: rectangle centered at `position` with the
    /// (length, width) extents. Height plays no role here.
    pub fn footprint(&self) -> Rect {
        Rect::centered(self.position, self.size.0, self.size.1)
    }
}

/// One straight wall fragment.
#[derive(Debug, Clone, PartialEq)]
pub struct WallSegment {
    pub start: Point,
    pub end: Point,
}

impl WallSegment {
    pub fn new(start: Point, end: Point) -> Result<Self> {
        if start == end {
            return Err(Error::InvalidGeometry(
                "wall segment endpoints must differ".into(),
            ));
        }
        Ok(WallSegment { start, end })
    }

    pub fn midpoint(&self) -> Point {
        Point::new(
            (self.start.x + self.end.x) / 2.0,
            (self.start.y + self.end.y) / 2.0,
        )
    }

    pub fn length(&self) -> f64 {
        self.start.distance(&self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpeningKind {
    Door,
    Window,
}

impl OpeningKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OpeningKind::Door => "door",
            OpeningKind::Window => "window",
        }
    }

    pub fn from_str(s: &str) -> Result<OpeningKind> {
        match s {
            "door" => Ok(OpeningKind::Door),
            "window" => Ok(OpeningKind::Window),
            other => Err(Error::Parse(format!("unknown opening kind `{other}`"))),
        }
    }
}

/// A door or window, described by its center and width along the wall.
#[derive(Debug, Clone, PartialEq)]
pub struct Opening {
    pub kind: OpeningKind,
    pub position: Point,
    pub width: f64,
}

impl Opening {
    pub fn new(kind: OpeningKind, position: Point, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "opening width must be positive, got {width}"
            )));
        }
        Ok(Opening {
            kind,
            position,
            width,
        })
    }
}

/// Opening centers may sit exactly on the bounds; allow this much slack.
pub const OPENING_BOUNDS_TOLERANCE: f64 = 0.01;

/// The empty room: wall fragments, openings, and the bounding rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct FloorPlan {
    pub walls: Vec<WallSegment>,
    pub openings: Vec<Opening>,
    pub bounds: Rect,
}

impl FloorPlan {
    pub fn new(walls: Vec<WallSegment>, openings: Vec<Opening>, bounds: Rect) -> Result<Self> {
        if walls.len() < 3 {
            return Err(Error::InvalidGeometry(format!(
                "a closed room needs at least 3 wall segments, got {}",
                walls.len()
            )));
        }
        if !(bounds.width() > 0.0 && bounds.height() > 0.0) {
            return Err(Error::InvalidGeometry(
                "floor plan bounds must have positive area".into(),
            ));
        }
        let tolerant = bounds.expand(OPENING_BOUNDS_TOLERANCE);
        for (i, o) in openings.iter().enumerate() {
            if !tolerant.contains(&o.position) {
                return Err(Error::InvalidGeometry(format!(
                    "opening {i} center ({:.3}, {:.3}) lies outside plan bounds",
                    o.position.x, o.position.y
                )));
            }
        }
        Ok(FloorPlan {
            walls,
            openings,
            bounds,
        })
    }

    /// Axis-aligned rectangular room traced counter-clockwise from the
    /// lower-left corner, with the given openings.
    pub fn rectangular(bounds: Rect, openings: Vec<Opening>) -> Result<Self> {
        let Rect { min, max } = bounds;
        let walls = vec![
            WallSegment::new(Point::new(min.x, min.y), Point::new(max.x, min.y))?,
            WallSegment::new(Point::new(max.x, min.y), Point::new(max.x, max.y))?,
            WallSegment::new(Point::new(max.x, max.y), Point::new(min.x, max.y))?,
            WallSegment::new(Point::new(min.x, max.y), Point::new(min.x, min.y))?,
        ];
        FloorPlan::new(walls, openings, bounds)
    }
}

/// One dataset element: floor-plan, furniture layout, label and id.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub scene_id: u64,
    pub floor_plan: FloorPlan,
    pub layout: Vec<FurnitureItem>,
    pub label: RoomLabel,
}

impl Scene {
    pub fn new(
        scene_id: u64,
        floor_plan: FloorPlan,
        layout: Vec<FurnitureItem>,
        label: RoomLabel,
        label_config: &LabelConfig,
    ) -> Result<Self> {
        for (i, item) in layout.iter().enumerate() {
            if !item.footprint().intersects(&floor_plan.bounds) {
                return Err(Error::InvalidGeometry(format!(
                    "furniture item {i} footprint does not intersect the room bounds"
                )));
            }
        }
        let expected = label_from_dimensions(&floor_plan.bounds, label.room_type, label_config)?;
        if expected.dim_category != label.dim_category {
            return Err(Error::Dataset(format!(
                "label dim_category {} inconsistent with room dimensions (expected {})",
                label.dim_category, expected.dim_category
            )));
        }
        Ok(Scene {
            scene_id,
            floor_plan,
            layout,
            label,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> LabelConfig {
        LabelConfig::default()
    }

    fn bedroom_bounds(shorter: f64) -> Rect {
        Rect::from_coords(0.0, 0.0, shorter + 1.0, shorter)
    }

    #[test]
    fn default_config_has_14_subcategories() {
        let c = cfg();
        c.validate().unwrap();
        assert_eq!(c.total_subcategories(), 14);
        assert_eq!(c.bins(RoomType::Bedroom), 5);
        assert_eq!(c.bins(RoomType::Bathroom), 5);
        assert_eq!(c.bins(RoomType::Study), 4);
    }

    #[test]
    fn tatami_common_functional_bedrooms() {
        let c = cfg();
        let tatami = label_from_dimensions(&bedroom_bounds(2.5), RoomType::Bedroom, &c).unwrap();
        assert_eq!(tatami.dim_category, 0);
        let common = label_from_dimensions(&bedroom_bounds(3.0), RoomType::Bedroom, &c).unwrap();
        assert_eq!(common.dim_category, 1);
        let func = label_from_dimensions(&bedroom_bounds(4.0), RoomType::Bedroom, &c).unwrap();
        assert_eq!(func.dim_category, 2);
    }

    #[test]
    fn thresholds_are_inclusive_on_the_left() {
        let c = cfg();
        let at_27 = label_from_dimensions(&bedroom_bounds(2.7), RoomType::Bedroom, &c).unwrap();
        assert_eq!(at_27.dim_category, 1);
        let at_34 = label_from_dimensions(&bedroom_bounds(3.4), RoomType::Bedroom, &c).unwrap();
        assert_eq!(at_34.dim_category, 2);
    }

    #[test]
    fn shorter_side_governs_by_default() {
        let c = cfg();
        // 2.5 x 5.0: shorter side 2.5 -> tatami even though the longer
        // side is large.
        let bounds = Rect::from_coords(0.0, 0.0, 5.0, 2.5);
        let l = label_from_dimensions(&bounds, RoomType::Bedroom, &c).unwrap();
        assert_eq!(l.dim_category, 0);

        let longer_cfg = LabelConfig {
            governing: GoverningDimension::Longer,
            ..cfg()
        };
        let l2 = label_from_dimensions(&bounds, RoomType::Bedroom, &longer_cfg).unwrap();
        assert_eq!(l2.dim_category, 3); // 5.0 falls in [4.5, 5.2)
    }

    #[test]
    fn non_positive_dimension_is_invalid_geometry() {
        let c = cfg();
        let degenerate = Rect::from_coords(0.0, 0.0, 0.0, 3.0);
        let err = label_from_dimensions(&degenerate, RoomType::Bedroom, &c).unwrap_err();
        assert!(matches!(err, Error::InvalidGeometry(_)));
    }

    #[test]
    fn one_hot_is_a_unit_indicator() {
        let c = cfg();
        let first = RoomLabel::new(RoomType::Bedroom, 0, &c).unwrap();
        let v = one_hot_label(&first, &c);
        assert_eq!(v.len(), 14);
        assert_eq!(v[0], 1.0);
        assert_eq!(v.iter().sum::<f64>(), 1.0);

        let last = RoomLabel::new(RoomType::Study, 3, &c).unwrap();
        let v = one_hot_label(&last, &c);
        assert_eq!(v[13], 1.0);
        assert_eq!(v.iter().filter(|x| **x != 0.0).count(), 1);
    }

    #[test]
    fn one_hot_is_injective_over_all_labels() {
        let c = cfg();
        let mut seen = Vec::new();
        for rt in RoomType::ALL {
            for dim in 0..c.bins(rt) {
                let l = RoomLabel::new(rt, dim, &c).unwrap();
                let v = one_hot_label(&l, &c);
                assert!(!seen.contains(&v), "duplicate one-hot for {l:?}");
                seen.push(v);
            }
        }
        assert_eq!(seen.len(), 14);
    }

    #[test]
    fn footprint_is_centered_with_full_extents() {
        let table = CategoryTable::default();
        let item = FurnitureItem::new(0, Point::new(1.0, 1.0), (2.0, 2.0, 0.4), &table).unwrap();
        let fp = item.footprint();
        assert_eq!(fp.min, Point::new(0.0, 0.0));
        assert_eq!(fp.max, Point::new(2.0, 2.0));

        let item = FurnitureItem::new(0, Point::new(0.0, 0.0), (1.0, 1.0, 0.4), &table).unwrap();
        let fp = item.footprint();
        assert_eq!(fp.min, Point::new(-0.5, -0.5));
        assert_eq!(fp.max, Point::new(0.5, 0.5));
    }

    #[test]
    fn degenerate_furniture_is_rejected() {
        let table = CategoryTable::default();
        assert!(FurnitureItem::new(0, Point::new(0.0, 0.0), (0.0, 1.0, 1.0), &table).is_err());
        assert!(FurnitureItem::new(99, Point::new(0.0, 0.0), (1.0, 1.0, 1.0), &table).is_err());
    }

    #[test]
    fn floor_plan_rejects_openings_outside_bounds() {
        let bounds = Rect::from_coords(0.0, 0.0, 4.0, 4.0);
        let door = Opening::new(OpeningKind::Door, Point::new(2.0, 0.0), 0.9).unwrap();
        assert!(FloorPlan::rectangular(bounds, vec![door]).is_ok());

        let stray = Opening::new(OpeningKind::Window, Point::new(10.0, 0.0), 1.0).unwrap();
        assert!(FloorPlan::rectangular(bounds, vec![stray]).is_err());

        // Within the 1 cm tolerance band is fine.
        let near = Opening::new(OpeningKind::Window, Point::new(4.005, 2.0), 1.0).unwrap();
        assert!(FloorPlan::rectangular(bounds, vec![near]).is_ok());
    }

    #[test]
    fn scene_rejects_inconsistent_label() {
        let c = cfg();
        let bounds = Rect::from_coords(0.0, 0.0, 3.5, 2.5); // shorter 2.5 -> tatami
        let plan = FloorPlan::rectangular(bounds, vec![]).unwrap();
        let wrong = RoomLabel {
            room_type: RoomType::Bedroom,
            dim_category: 2,
        };
        assert!(Scene::new(1, plan.clone(), vec![], wrong, &c).is_err());
        let right = RoomLabel {
            room_type: RoomType::Bedroom,
            dim_category: 0,
        };
        assert!(Scene::new(1, plan, vec![], right, &c).is_ok());
    }

    #[test]
    fn label_is_piecewise_constant_near_thresholds() {
        let c = cfg();
        for t in [2.7_f64, 3.4] {
            let below = label_from_dimensions(&bedroom_bounds(t - 0.0009), RoomType::Bedroom, &c)
                .unwrap()
                .dim_category;
            let above = label_from_dimensions(&bedroom_bounds(t + 0.0009), RoomType::Bedroom, &c)
                .unwrap()
                .dim_category;
            // A sub-millimeter perturbation never moves a label by more
            // than the single bin the threshold separates.
            assert_eq!(above - below, 1);
            let barely_below =
                label_from_dimensions(&bedroom_bounds(t - 0.002), RoomType::Bedroom, &c)
                    .unwrap()
                    .dim_category;
            assert_eq!(barely_below, below);
        }
    }
}
