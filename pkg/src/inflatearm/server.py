"""HTTP + WebSocket wire protocol over the session layer.

Endpoints (JSON bodies, degrees/meters/newtons on the wire):

    POST /sessions                       robot spec -> {"session_id": ...}
    GET  /sessions/{id}/state            -> RobotSnapshot
    POST /sessions/{id}/targets/joints   {"angles_deg": [...]}
    POST /sessions/{id}/targets/tip      {"position_m": [x,y,z], "payload_kg": m}
    WS   /sessions/{id}/stream           snapshot push at 30 Hz

Serve mode additionally runs a 50 Hz stepper thread so sessions track
their targets in wall-clock time while clients watch the stream.
"""

import asyncio
import math
import threading
import time

from fastapi import Body, FastAPI, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import JointLimitError, SessionNotFoundError, SpecValidationError
from .session import SessionManager
from .specio import robot_config_from_dict

STREAM_HZ = 30.0
STEP_HZ = 50.0


class RealTimeStepper:
    """Daemon thread stepping every session at a fixed rate."""

    def __init__(self, manager: SessionManager, hz=STEP_HZ):
        self.manager = manager
        self.dt = 1.0 / hz
        self._stop = threading.Event()
        self._thread = None

    def start(self):
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name="session-stepper")
        self._thread.start()
        return self

    def stop(self):
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)

    def _run(self):
        next_tick = time.monotonic()
        while not self._stop.is_set():
            self.manager.step_all(self.dt)
            next_tick += self.dt
            pause = next_tick - time.monotonic()
            if pause > 0:
                self._stop.wait(pause)
            else:
                next_tick = time.monotonic()


def create_app(manager: SessionManager = None) -> FastAPI:
    manager = manager or SessionManager()
    app = FastAPI(title="inflatearm sim service")
    app.state.manager = manager
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(SessionNotFoundError)
    async def _session_not_found(request, exc):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(SpecValidationError)
    async def _invalid_spec(request, exc):
        return JSONResponse(status_code=422, content={
            "detail": "invalid robot spec",
            "problems": [{"field": f, "message": m} for f, m in exc.problems],
        })

    @app.exception_handler(JointLimitError)
    async def _joint_limit(request, exc):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.post("/sessions")
    def create_session(payload: dict = Body(...)):
        config = robot_config_from_dict(payload)
        session_id = manager.create_session(
            config.chain, initial_angles=config.initial_angles,
            omega_max=config.omega_max)
        return {"session_id": session_id}

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        return manager.snapshot(session_id).to_dict()

    @app.post("/sessions/{session_id}/targets/joints")
    def set_joint_targets(session_id: str, payload: dict = Body(...)):
        angles_deg = payload.get("angles_deg")
        if not isinstance(angles_deg, list):
            return JSONResponse(status_code=422,
                                content={"detail": "angles_deg must be a list"})
        try:
            angles = [math.radians(float(a)) for a in angles_deg]
        except (TypeError, ValueError):
            return JSONResponse(status_code=422,
                                content={"detail": "angles_deg must be numbers"})
        manager.set_joint_targets(session_id, angles)
        return {"ok": True}

    @app.post("/sessions/{session_id}/targets/tip")
    def set_tip_target(session_id: str, payload: dict = Body(...)):
        position = payload.get("position_m")
        if not isinstance(position, list) or len(position) != 3:
            return JSONResponse(status_code=422,
                                content={"detail": "position_m must be [x, y, z]"})
        try:
            position = [float(v) for v in position]
            payload_kg = float(payload.get("payload_kg", 0.0))
            result = manager.set_tip_target(session_id, position, payload_kg)
        except SessionNotFoundError:
            raise
        except (TypeError, ValueError) as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        return {"ok": True,
                "converged": bool(result.converged),
                "residual_m": float(result.residual),
                "targets_deg": [math.degrees(a) for a in result.angles]}

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str):
        try:
            manager.get(session_id)
        except SessionNotFoundError:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        interval = 1.0 / STREAM_HZ
        try:
            while True:
                snap = await asyncio.to_thread(manager.snapshot, session_id)
                await websocket.send_text(snap.to_json())
                await asyncio.sleep(interval)
        except (WebSocketDisconnect, SessionNotFoundError):
            pass

    return app


def serve(host="127.0.0.1", port=8000, log_path=None, step_hz=STEP_HZ):
    """Run the service with the internal stepper; blocks until interrupted."""
    import uvicorn

    manager = SessionManager(log_path=log_path)
    app = create_app(manager)
    stepper = RealTimeStepper(manager, hz=step_hz).start()
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    finally:
        stepper.stop()
        manager.close()
