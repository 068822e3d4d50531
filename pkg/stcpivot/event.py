from __future__ import annotations

import asyncio
import inspect
import logging
import time
import typing

logger = logging.getLogger(__name__)

Coroutine = typing.Callable[..., typing.Awaitable[typing.Any]]


class Event:
    """
    A named hook. Coroutine callbacks are registered with a priority and all
    invoked concurrently when the event is raised.

    Exceptions raised by callbacks are passed to `error_handler` (another event,
    raised with the exception, this event and the original parameters) when one
    is set, and propagated otherwise.
    """

    def __init__(self, name: str, *, error_handler: typing.Optional[Event] = None):
        """
        Initialises an event.

        :param name: The event name.
        :param error_handler: The event raised when a callback fails.
        """
        self.event_name = name
        self.error_handler = error_handler

        self.pass_extra_after = False
        self._after: typing.Optional[Event] = None

        self._callbacks: typing.Dict[int, typing.List[Coroutine]] = {}

    def __iadd__(self, callback: Coroutine):
        # default priority, use `.add_callback()` to custom it.
        self.add_callback(callback)

        return self

    def __isub__(self, callback: Coroutine):
        self.remove_callback(callback)

        return self

    async def __call__(self, *args, **kwargs):
        await self.raise_event(*args, **kwargs)

    def __repr__(self) -> str:
        return f"<Event {self.event_name!r}>"

    def after(self, *, pass_extra: bool = False) -> Event:
        """
        Returns an event that is raised after the callbacks, with the current parameters.

        :param pass_extra: Pass the callbacks execution time in seconds first if it is set to `True`.
        """
        self.pass_extra_after = pass_extra

        if self._after is None:
            self._after = Event(f"<after:{self.event_name}>", error_handler=self.error_handler)

        return self._after

    @property
    def callbacks(self) -> typing.Tuple[Coroutine, ...]:
        """
        Callbacks by ascending priority, then registration order.
        """
        return tuple(
            callback for key in sorted(self._callbacks) for callback in self._callbacks[key]
        )

    def as_callback(self, *, priority: int = 1) -> typing.Callable[[Coroutine], Coroutine]:
        """
        A decorator which registers a coroutine as a callback of this event.
        """

        def decorator(callback: Coroutine) -> Coroutine:
            self.add_callback(callback, priority=priority)

            return callback

        return decorator

    def add_callback(self, callback: Coroutine, *, priority: int = 1):
        """
        Registers a callback to this event.

        :param callback: The coroutine function to register.
        :param priority: When the event is raised, callbacks are started in priority ascending order.

        :raise TypeError: If the callback is not a coroutine function.
        :raise ValueError: If the callback is already registered.
        """
        if not inspect.iscoroutinefunction(callback):
            raise TypeError(f"Callback {callback.__name__!r} must be a coroutine function.")

        if callback in self.callbacks:
            raise ValueError(f"Callback {callback.__name__!r} is already registered.")

        self._callbacks.setdefault(priority, []).append(callback)

    def remove_callback(self, callback: Coroutine):
        """
        Removes a callback from this event.

        :raise ValueError: If the callback is not registered in this event.
        """
        new = {p: [c_ for c_ in c if c_ != callback] for p, c in self._callbacks.items()}

        if new == self._callbacks:
            raise ValueError(f"Callback {callback.__name__!r} is not registered.")

        self._callbacks = new

    async def raise_event(self, *args, **kwargs):
        """
        Calls all registered callbacks and waits for them.

        :param args: Invocation parameters.
        :param kwargs: Invocation keyword parameters.
        """
        loop = asyncio.get_running_loop()
        start_time = time.perf_counter()
        tasks = [loop.create_task(self._invoke(c, *args, **kwargs)) for c in self.callbacks]

        await asyncio.gather(*tasks)

        if self._after is not None and self._after.callbacks:
            # pass extra parameter only if specified
            if self.pass_extra_after:
                args = (time.perf_counter() - start_time, *args)

            await self._after.raise_event(*args, **kwargs)

    async def _invoke(self, callback: Coroutine, *args, **kwargs):
        try:
            await callback(*args, **kwargs)

        except Exception as e:
            if self.error_handler is None or self.error_handler is self:
                raise

            logger.debug("Callback %r of %r failed: %r.", callback.__name__, self, e)
            await self.error_handler.raise_event(e, self, *args, **kwargs)
