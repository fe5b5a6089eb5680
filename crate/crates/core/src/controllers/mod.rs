//! Feedback controllers: discrete PID, goal-heading control, and a
//! triangulation-based wall follower.

mod pid;
mod wall;

pub use pid::{heading_controller, pid_step, PidGains, PidState};
pub use wall::{
    triangle_height, wall_follow_step, Side, WallFollowConfig, WallFollowState, WallMode,
};
