//! Pinhole projection: turn a 3D point cloud into XYZUV points.
//!
//! ```bash
//! cargo run -p speedctl --example project_cloud
//! ```

use speedctl::camera::CameraModel;
use speedctl::types::Point3;

fn main() {
    // A forward-facing camera at the body origin: 640x480, ~53 deg HFOV.
    let cam = CameraModel::forward_facing(500.0, 500.0, 320.0, 240.0, 640, 480).unwrap();

    let cloud = vec![
        Point3::new(10.0, 0.0, 0.0),  // straight ahead -> principal point
        Point3::new(10.0, 2.0, 0.0),  // left of the vehicle -> left in the image
        Point3::new(10.0, 0.0, 1.0),  // above the sensor -> higher in the image
        Point3::new(5.0, -1.5, 0.5),  // near, right, raised
        Point3::new(-3.0, 0.0, 0.0),  // behind the vehicle -> no projection
        Point3::new(2.0, 8.0, 0.0),   // far off-axis -> projects outside the image
    ];

    println!("{:>8} {:>8} {:>8}   {:>9} {:>9}  in image?", "x", "y", "z", "u", "v");
    for (p, uv) in cam.project_cloud(&cloud) {
        match uv {
            Some(uv) => println!(
                "{:8.2} {:8.2} {:8.2}   {:9.2} {:9.2}  {}",
                p.x, p.y, p.z, uv.u, uv.v, cam.in_image(&uv)
            ),
            None => println!("{:8.2} {:8.2} {:8.2}   {:>9} {:>9}  -", p.x, p.y, p.z, "behind", "camera"),
        }
    }

    // The projection inverts given the camera-frame depth (body x here).
    let p = Point3::new(12.0, -2.0, 1.3);
    let uv = cam.project_point(&p).unwrap();
    let back = cam.back_project(&uv, p.x);
    println!("\nround trip: {:?} -> ({:.2}, {:.2}) -> {:?}", p, uv.u, uv.v, back);
}
