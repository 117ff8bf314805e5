pub mod demand;
pub mod exact;
pub mod frontier;
pub mod lp;
pub mod model;
